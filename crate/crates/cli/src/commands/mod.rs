pub mod cover;
pub mod delta;
pub mod embed;
pub mod report;
pub mod validate;
