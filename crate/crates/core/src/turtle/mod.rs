//! Turtle parsing and serialization. Turtle documents (UTF-8) are the only
//! graph exchange format of the toolkit.

mod parser;
mod writer;

pub use parser::{parse_turtle, TurtleError};
pub use writer::{encode_term, serialize_turtle};
