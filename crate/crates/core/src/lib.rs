pub mod error;
pub mod exactnum;
pub mod heckealg;
pub mod heckemod;
pub mod hilbert;
pub mod gstar;
pub mod padicgrp;
pub mod par;
pub mod suite;
pub mod whitzeta;
