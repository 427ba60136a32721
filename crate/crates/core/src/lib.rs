pub mod algebra;
pub mod diagram;
pub mod jones;
pub mod alexander;
pub mod arf;
pub mod khovanov;
pub mod hfkalg;
pub mod symunion;
pub mod scanner;
