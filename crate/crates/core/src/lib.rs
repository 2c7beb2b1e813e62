pub mod algset;
pub mod bigfloat;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod heights;
pub mod maps;
pub mod numeric;
pub mod point;
pub mod poly;
pub mod report;
pub mod roots;
