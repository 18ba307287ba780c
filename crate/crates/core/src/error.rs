use thiserror::Error;

pub type Result<T, E = CsgError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CsgError {
    #[error("edge ({0}, {1}) has an endpoint outside the {2}-agent universe")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("self-loop on agent {0}")]
    SelfLoop(usize),
    #[error("agent {agent} is outside the {n}-agent universe")]
    AgentOutOfRange { agent: usize, n: usize },
    #[error("the synergy graph is disconnected; solve each connected component separately")]
    Disconnected,
    #[error("the pseudotree does not match the synergy graph: {0}")]
    InvalidPseudotree(String),
    #[error("coalition is empty")]
    EmptyCoalition,
    #[error("pinned agent {0} is not in the ground set")]
    PinNotInGround(usize),
    #[error("coalition {0:?} is not connected in the synergy graph")]
    Infeasible(Vec<usize>),
    #[error("value table has no entry for coalition {0:?}")]
    MissingValue(Vec<usize>),
    #[error("subproblem {0:?} was read before it was computed")]
    MissingSubproblem(Vec<usize>),
    #[error("{what} is limited to {limit} agents (instance has {n}); the table grows exponentially with n")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("deadline exceeded")]
    Timeout,
}
