pub mod mat;
pub mod intmat;
pub mod bareiss;
pub mod modular;
pub mod reconstruct;
pub mod dixon;
pub mod rank;
pub mod certify;
pub mod farkas;
