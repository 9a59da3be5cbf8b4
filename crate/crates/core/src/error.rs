use std::path::PathBuf;

/// Structural and contract errors.
///
/// Law violations are not errors; they are reported through
/// [`LawReport`](crate::LawReport). An `Error` means the input could not be
/// checked at all.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{kind} set is empty")]
    Empty { kind: &'static str },
    #[error("duplicate {kind} `{id}`")]
    Duplicate { kind: &'static str, id: String },
    #[error("unknown {kind} `{id}`")]
    Unknown { kind: &'static str, id: String },
    #[error("{map} is not total: no value for `{id}`")]
    NotTotal { map: String, id: String },
    #[error("order is not antisymmetric: `{a}` <= `{b}` and `{b}` <= `{a}`")]
    Antisymmetry { a: String, b: String },
    #[error("`{member}` is in the set but `{below}` <= `{member}` is not; not a downset")]
    NotDownset { member: String, below: String },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },
    #[error("non-finite input {value}")]
    NonFinite { value: f64 },
    #[error("system is not compatible with its equivalence: `{x}` ~ `{y}` but their images fall in different classes")]
    Uncertified { x: String, y: String },
    #[error("`{x}` ~ `{y}` but H(`{x}`) = `{hx}` differs from H(`{y}`) = `{hy}`")]
    NotClassConstant { x: String, y: String, hx: String, hy: String },
    #[error("{0} violates its laws")]
    LawPrecondition(&'static str),
    #[error("`{id}` is not a class representative")]
    NotRepresentative { id: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn unknown(kind: &'static str, id: impl Into<String>) -> Self {
        Error::Unknown { kind, id: id.into() }
    }

    pub(crate) fn not_total(map: impl Into<String>, id: impl Into<String>) -> Self {
        Error::NotTotal { map: map.into(), id: id.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
