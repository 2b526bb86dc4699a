use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("duplicate cell id `{0}`")]
    DuplicateCell(String),
    #[error("simplex {index} lists vertex `{vertex}` twice")]
    DuplicateVertex { vertex: String, index: usize },
    #[error("simplex {0} is empty")]
    EmptySimplex(usize),
    #[error("duplicate cover relation `{0}<{1}`")]
    DuplicateCover(String, String),
    #[error("invalid cover `{lower}<{upper}`: {reason}")]
    InvalidCover {
        lower: String,
        upper: String,
        reason: String,
    },
    #[error("cell `{0}` is missing faces below it")]
    NotGraded(String),
    #[error("no value given for cell `{0}`")]
    MissingValue(String),
    #[error("function has {got} values but the complex has {expected} cells")]
    FunctionLength { got: usize, expected: usize },
    #[error("not a discrete Morse function: condition ({condition}) fails at `{cell}`")]
    NotMorse { cell: String, condition: u8 },
    #[error("operation requires a regular complex")]
    NotRegular,
    #[error("complex is not connected")]
    Disconnected,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("sign vector has {got} entries but the complex has {expected} covers")]
    SignLength { got: usize, expected: usize },
    #[error("sign vector is zero on `{0}`; regions are open")]
    ZeroEntry(String),
    #[error("sign vector is not realizable")]
    NotRealizable,
    #[error("enumeration guard exceeded: {edges} hyperplanes, limit {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error("`{0}` is not a critical 1-cell")]
    NotCriticalEdge(String),
    #[error("invalid merge tree: {0}")]
    InvalidTree(String),
    #[error("invalid edit move: {0}")]
    InvalidEdit(String),
    #[error("merge tree is not well-branched")]
    NotWellBranched,
    #[error("trees are not related by edit moves in one direction")]
    NotRelated,
    #[error("invalid barcode: {0}")]
    InvalidBarcode(String),
    #[error("invalid cell map: {0}")]
    InvalidMap(String),
    #[error("cell map precondition failed: {0}")]
    MapPrecondition(String),
    #[error("cannot parse `{0}` as a rational number")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
