#![allow(dead_code)]

pub mod mutations;
pub mod random;
pub mod reference;
pub mod sample;
