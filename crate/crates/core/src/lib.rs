//! Conversion toolkit for legacy linguistic field data.
//!
//! Backslash-coded field files ([`fosf`]) and spreadsheet exports
//! ([`tabular`]) are converted into one interlinear model ([`model`]),
//! serialized to a validated XML representation ([`xml`]), crosswalked to
//! library metadata vocabularies ([`crosswalk`]), linked to time-offset
//! media ([`media`]), rendered for reading ([`render`]) and catalogued
//! ([`catalog`]).
//!
//! All text input and output is UTF-8.

pub mod catalog;
pub mod crosswalk;
pub mod diagnostic;
pub mod fosf;
pub mod media;
pub mod model;
pub mod render;
pub mod tabular;
pub mod xml;

pub use diagnostic::{codes, Diagnostic, Error, Outcome, Result, Severity};
