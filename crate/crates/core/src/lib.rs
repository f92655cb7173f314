pub mod cli;
pub mod endspace;
pub mod exhaustion;
pub mod mcgword;
pub mod pants;
pub mod shiftbasis;
pub mod surface;
