//! Parsing, validation and printing of the analyzed C subset.

pub mod ast;
mod emit;
mod lexer;
mod parser;
mod validate;

use thiserror::Error;

pub use ast::*;
pub use emit::emit;
pub use parser::parse;
pub use validate::{block_defs, normalize_function, validate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("{span}: syntax error: {message}")]
    Syntax { span: Span, message: String },
    #[error("{span}: unsupported construct: {construct}")]
    Unsupported { span: Span, construct: String },
    #[error("{span}: {message}")]
    Invalid { span: Span, message: String },
}

impl FrontendError {
    pub(crate) fn syntax(span: Span, message: impl Into<String>) -> Self {
        FrontendError::Syntax {
            span,
            message: message.into(),
        }
    }

    pub(crate) fn unsupported(span: Span, construct: impl Into<String>) -> Self {
        FrontendError::Unsupported {
            span,
            construct: construct.into(),
        }
    }

    pub(crate) fn invalid(span: Span, message: impl Into<String>) -> Self {
        FrontendError::Invalid {
            span,
            message: message.into(),
        }
    }

    pub fn span(&self) -> Span {
        match self {
            FrontendError::Syntax { span, .. }
            | FrontendError::Unsupported { span, .. }
            | FrontendError::Invalid { span, .. } => *span,
        }
    }
}
