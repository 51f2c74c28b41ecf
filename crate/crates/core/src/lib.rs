pub mod ball;
pub mod homology;
pub mod mapclass;
pub mod shadowing;
pub mod surface;
