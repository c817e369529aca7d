pub mod classes;
pub mod cli;
pub mod combinat;
pub mod descendent;
pub mod freelie;
pub mod kclasses;
pub mod ring;
pub mod selftest;
pub mod ucoeff;
pub mod wallcross;
