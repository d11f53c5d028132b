pub mod asymptotics;
pub mod engines;
pub mod error;
pub mod hp;
pub mod lab;
pub mod norms;
pub mod params;
pub mod series;
