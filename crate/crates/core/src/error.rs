use core::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Every failure the numerical routines can report.
///
/// The variants are plain data so they can be copied into reports; see
/// [`Error::code`] for the stable identifier written to JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// Norming of zero: no power of two maps it into `(π/2, π]`.
    ZeroInput,
    /// A NaN or infinite value reached an operation that needs a finite one.
    NonFinite,
    /// A droop (or a quantity whose logarithm is taken) was not strictly positive.
    NonPositiveDroop,
    /// The regularized normal system has no unique solution.
    SingularSystem,
    /// The reconstructed frequency deviation is too close to zero to divide by.
    DegenerateFrequency,
    /// The period ratio is real (or the nome is too close to the unit circle).
    DegenerateLattice,
    /// The lattice discriminant vanished.
    ZeroDiscriminant,
    /// A wing sample has zero vertical speed.
    ZeroVerticalSpeed,
    /// `V_out` and `V_in` coincide, so their correlation is undefined.
    EqualPotentials,
    /// No integer resonance pair exists within the search bound.
    NoResonance,
    /// The receiver channels violate `R1 > R2`.
    ChannelOrder,
    /// The scan speed sits on a pole of the secant.
    GrazingScan,
    /// The regression design matrix is rank deficient.
    RankDeficient,
    /// IRLS hit its iteration cap without converging.
    NonConvergent,
    /// The regression received no rows.
    EmptyData,
    /// A precondition on an argument was violated.
    InvalidInput(&'static str),
}

impl Error {
    /// Stable machine-readable name of the error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroInput => "ZeroInput",
            Error::NonFinite => "NonFinite",
            Error::NonPositiveDroop => "NonPositiveDroop",
            Error::SingularSystem => "SingularSystem",
            Error::DegenerateFrequency => "DegenerateFrequency",
            Error::DegenerateLattice => "DegenerateLattice",
            Error::ZeroDiscriminant => "ZeroDiscriminant",
            Error::ZeroVerticalSpeed => "ZeroVerticalSpeed",
            Error::EqualPotentials => "EqualPotentials",
            Error::NoResonance => "NoResonance",
            Error::ChannelOrder => "ChannelOrder",
            Error::GrazingScan => "GrazingScan",
            Error::RankDeficient => "RankDeficient",
            Error::NonConvergent => "NonConvergent",
            Error::EmptyData => "EmptyData",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroInput => f.write_str("cannot norm zero into (pi/2, pi]"),
            Error::NonFinite => f.write_str("non-finite input"),
            Error::NonPositiveDroop => f.write_str("droop must be strictly positive"),
            Error::SingularSystem => f.write_str("regularized system is numerically singular"),
            Error::DegenerateFrequency => {
                f.write_str("reconstructed frequency deviation is zero; droop undefined")
            }
            Error::DegenerateLattice => f.write_str("degenerate lattice: period ratio is real"),
            Error::ZeroDiscriminant => f.write_str("lattice discriminant vanishes"),
            Error::ZeroVerticalSpeed => f.write_str("wing trace has a zero vertical speed"),
            Error::EqualPotentials => f.write_str("internal and external potentials coincide"),
            Error::NoResonance => f.write_str("no integer resonance within the search bound"),
            Error::ChannelOrder => f.write_str("receiver channels require R1 > R2"),
            Error::GrazingScan => f.write_str("scan speed on a pole of the secant"),
            Error::RankDeficient => f.write_str("design matrix is rank deficient"),
            Error::NonConvergent => f.write_str("IRLS did not converge"),
            Error::EmptyData => f.write_str("no regression rows"),
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
        }
    }
}

impl core::error::Error for Error {}
