use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty factor list")]
    EmptyProduct,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("density matrix trace is {trace}, expected 1")]
    NotNormalized { trace: f64 },
    #[error("cut {cut} out of range for {n_parties} parties")]
    CutOutOfRange { cut: usize, n_parties: usize },
    #[error("parameter `{name}` = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("linear program: {0}")]
    Lp(#[from] crate::polytope::LpError),
    #[error("scenario too large: {vertices} vertices exceeds cap {cap}")]
    TooLarge { vertices: u128, cap: u128 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no sign change in bracket: criterion {0}")]
    NoSignChange(crate::search::Bracketing),
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}
