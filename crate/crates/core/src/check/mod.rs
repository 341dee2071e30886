//! Whole-program checking: signatures, coordinates, operation constraints
//! and evaluation, plus diagnostic rendering.

mod checker;
mod render;

pub use checker::{analyze, check_program, evaluate_binding, Analysis, Annotation, CheckReport};
pub use render::{render_json, render_text};
