pub mod antisquare;
pub mod enumeration;
pub mod error;
pub mod fibanalysis;
pub mod morphism;
pub mod rational;
pub mod repetition;
pub mod search;
pub mod word;

pub use error::{Error, Result};
pub use rational::{PowerBound, Rational};
pub use word::Word;
