use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A size, index or parameter outside its documented range.
    InvalidArgument(String),
    /// Two successive refinements of a quadrature disagree beyond tolerance.
    NonConvergence {
        what: &'static str,
        estimate: f64,
        change: f64,
    },
    /// Hypergeometric parameters that do not give a terminating series.
    NonTerminating,
    /// Grid cannot resolve the requested harmonic degree.
    InsufficientResolution {
        required: usize,
        available: usize,
    },
    /// Support function fails the convexity or positivity test.
    ConvexityViolation {
        direction: [f64; 3],
        value: f64,
    },
    /// A visual angle was requested from a point that is not outside the shadow.
    PointInside,
    /// The point lies on a supporting line to within the tangency tolerance.
    TangencyDegenerate,
    /// The far-field fit of a line integrand is unusable.
    TailInstability(&'static str),
    /// A function of the visual angle that does not decay fast enough at zero.
    SlowDecay {
        exponent: f64,
    },
    /// A computed quantity is NaN or infinite.
    NonFinite(&'static str),
    UnknownIdentity(String),
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::NonConvergence {
                what,
                estimate,
                change,
            } => write!(
                f,
                "{what} did not converge (estimate {estimate:e}, last change {change:e})"
            ),
            Error::NonTerminating => f.write_str("hypergeometric series does not terminate"),
            Error::InsufficientResolution {
                required,
                available,
            } => write!(
                f,
                "grid resolves degree {available} but degree {required} was requested"
            ),
            Error::ConvexityViolation { direction, value } => write!(
                f,
                "convexity violated in direction ({:.6}, {:.6}, {:.6}): value {value:e}",
                direction[0], direction[1], direction[2]
            ),
            Error::PointInside => f.write_str("point inside body"),
            Error::TangencyDegenerate => f.write_str("tangency degenerate"),
            Error::TailInstability(msg) => write!(f, "tail-estimate instability: {msg}"),
            Error::SlowDecay { exponent } => write!(
                f,
                "integrand decays like omega^{exponent:.2} at zero; need an exponent above 2.5"
            ),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::UnknownIdentity(id) => write!(f, "unknown identity id `{id}`"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
