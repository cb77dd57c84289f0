use thiserror::Error;

/// Why a graph failed validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("malformed line: {0}")]
    Syntax(String),
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(String),
    #[error("edge `{0}`-`{1}` stated twice")]
    DuplicateEdge(String, String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("measure m(`{vertex}`) = {value} must be positive")]
    NonPositiveMeasure { vertex: String, value: f64 },
    #[error("potential c(`{vertex}`) = {value} must be non-negative")]
    NegativePotential { vertex: String, value: f64 },
    #[error("edge weight b(`{0}`,`{1}`) = {2} must be positive (and at least 1e-300)")]
    NonPositiveWeight(String, String, f64),
    #[error("vertex `{0}` referenced before declaration")]
    UndeclaredVertex(String),
    #[error("value {0} is not finite")]
    NonFinite(f64),
    #[error("graph has no vertices")]
    Empty,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("line {line}: {kind}")]
    Load { line: usize, kind: GraphError },
    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    InvalidVertex { vertex: usize, count: usize },
    #[error("function has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("function entry at vertex {vertex} is not finite")]
    NonFiniteValue { vertex: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("window is not connected in the induced subgraph")]
    WindowDisconnected,
    #[error("window is empty")]
    EmptyWindow,
    #[error("window covers the whole vertex set; no room for a source term")]
    WindowIsWholeGraph,
    #[error("vertex {vertex} is not in the window")]
    NotInWindow { vertex: usize },
    #[error("weight function must be positive, got {value} at vertex {vertex}")]
    NonPositiveWeightFunction { vertex: usize, value: f64 },
    #[error("function has a negative entry {value} at vertex {vertex}")]
    NegativeEntry { vertex: usize, value: f64 },
    #[error("not a super-solution: (L - E)w = {slack:e} at vertex {vertex}")]
    NotSupersolution { vertex: usize, slack: f64 },
    #[error("not a solution: max |(L - E)w| = {residual:e} exceeds {tol:e}")]
    NotSolution { residual: f64, tol: f64 },
    #[error("function vanishes identically")]
    ZeroFunction,
    #[error("{what} did not converge in {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("energy {energy} is not below the ground energy {e0} by the margin {margin:e}")]
    EnergyNotBelowGround { energy: f64, e0: f64, margin: f64 },
    #[error("operator is not positive definite at energy {energy}")]
    Indefinite { energy: f64 },
    #[error("positivity lost: entry {value:e} at vertex {vertex}")]
    PositivityLost { vertex: usize, value: f64 },
    #[error("energy {energy} too high: edge factor {factor} <= 0 at vertex {vertex}")]
    EnergyTooHigh {
        vertex: usize,
        energy: f64,
        factor: f64,
    },
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("window of {size} vertices exceeds the exact-enumeration limit {limit}")]
    WindowTooLarge { size: usize, limit: usize },
    #[error("dense oracle limited to {limit} vertices, graph has {size}")]
    OracleTooLarge { size: usize, limit: usize },
    #[error("graph is not unweighted (b in {{0,1}}, m = 1, c = 0 required)")]
    NotUnweighted,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Numerical failures and guard trips, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Disconnected
                | Error::NonConvergence { .. }
                | Error::EnergyNotBelowGround { .. }
                | Error::Indefinite { .. }
                | Error::PositivityLost { .. }
                | Error::EnergyTooHigh { .. }
                | Error::WindowTooLarge { .. }
                | Error::OracleTooLarge { .. }
                | Error::WindowDisconnected
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
