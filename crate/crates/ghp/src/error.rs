use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("root iteration did not converge after {iterations} sweeps at {precision_bits} bits")]
    NonConvergence { iterations: usize, precision_bits: usize },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("turning points collide (separation {separation:e})")]
    TurningPointCollision { separation: f64 },
    #[error("turning point labels are ambiguous (margin {margin:e})")]
    LabelAmbiguity { margin: f64 },
    #[error("closed form deviates from the contour quadrature by {deviation:e}")]
    BranchSuspect { deviation: f64 },
    #[error("contour is degenerate: {0}")]
    ContourDegenerate(String),
    #[error("Newton iteration diverged after {steps} steps (residual {residual:e})")]
    NewtonDiverged { steps: usize, residual: f64 },
    #[error("iterate left the region where the closed forms hold")]
    OutsideK,
    #[error("corner classification failed: {0}")]
    ClassificationFailure(String),
    #[error("continuation path crosses a branch cut")]
    CutCrossing,
    #[error("branch jump during continuation (margin {margin:e})")]
    BranchJump { margin: f64 },
    #[error("logarithm argument vanishes")]
    LogSingular,
    #[error("level curve trace lost: {0}")]
    TraceLost(String),
    #[error("edge does not end at the expected corner: {0}")]
    EdgeMismatch(String),
    #[error("mutual-nearest and greedy matchings disagree on {fraction:.3} of pairs")]
    MatchingAmbiguous { fraction: f64 },
    #[error("regression is rank deficient")]
    FitDegenerate,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Name of the pipeline stage that raises this error.
    pub fn module(&self) -> &'static str {
        use Error::*;
        match self {
            DegreeCapExceeded { .. } => "hermite",
            NonConvergence { .. } => "roots",
            DomainError(_) => "elliptic",
            TurningPointCollision { .. }
            | LabelAmbiguity { .. }
            | BranchSuspect { .. }
            | ContourDegenerate(_)
            | NewtonDiverged { .. } => "actions",
            OutsideK => "lattice",
            ClassificationFailure(_)
            | CutCrossing
            | BranchJump { .. }
            | LogSingular
            | TraceLost(_)
            | EdgeMismatch(_) => "region",
            MatchingAmbiguous { .. } | FitDegenerate => "compare",
            InvalidInput(_) | Io(_) | Csv(_) | Json(_) => "cli",
        }
    }

    /// Short machine-readable variant name.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            DegreeCapExceeded { .. } => "DegreeCapExceeded",
            NonConvergence { .. } => "NonConvergence",
            DomainError(_) => "DomainError",
            TurningPointCollision { .. } => "TurningPointCollision",
            LabelAmbiguity { .. } => "LabelAmbiguity",
            BranchSuspect { .. } => "BranchSuspect",
            ContourDegenerate(_) => "ContourDegenerate",
            NewtonDiverged { .. } => "NewtonDiverged",
            OutsideK => "OutsideK",
            ClassificationFailure(_) => "ClassificationFailure",
            CutCrossing => "CutCrossing",
            BranchJump { .. } => "BranchJump",
            LogSingular => "LogSingular",
            TraceLost(_) => "TraceLost",
            EdgeMismatch(_) => "EdgeMismatch",
            MatchingAmbiguous { .. } => "MatchingAmbiguous",
            FitDegenerate => "FitDegenerate",
            InvalidInput(_) => "InvalidInput",
            Io(_) => "Io",
            Csv(_) => "Csv",
            Json(_) => "Json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
