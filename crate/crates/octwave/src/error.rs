use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum OctError {
    /// A point fed to a chart map lies outside the chart's validity region.
    /// The message names the violated inequality.
    #[error("out of chart region: {0}")]
    OutOfRegion(String),

    /// A boundary point was handed to an interior-only inverse map.
    #[error("no interior preimage: {0}")]
    NoInteriorPreimage(String),

    /// A fiber transition was requested across (or too close to) the target
    /// chart's boundary.
    #[error("fiber chart boundary: {0}")]
    FiberChartBoundary(String),

    /// Mismatched chart/operation combination.
    #[error("incompatible charts: {0}")]
    IncompatibleCharts(String),

    /// Invalid or inconsistent parameters.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A regression or fit could not be performed on the supplied data.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, OctError>;
