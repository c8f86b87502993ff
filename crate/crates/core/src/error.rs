use thiserror::Error;

use crate::metric::Vertex;
use crate::space::PieceId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph is disconnected: vertex {0} unreachable from 0")]
    Disconnected(Vertex),
    #[error("empty vertex subset")]
    EmptySubset,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown piece {0}")]
    UnknownPiece(PieceId),
    #[error("piece {0} lists vertices out of order or repeated")]
    UnsortedPiece(PieceId),
    #[error("basepoint {0} out of range")]
    BadBasepoint(Vertex),
    #[error("space is not tree-graded: {0}")]
    Invalid(String),
    #[error("vertex {vertex} is not in piece {piece}")]
    NotInPiece { piece: PieceId, vertex: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("piece {0} is not acyclic")]
    NotAcyclic(PieceId),
    #[error("piece {0} is not a grid")]
    NotAGrid(PieceId),
    #[error("vertex {vertex} is not a corner of grid piece {piece}")]
    NotACorner { piece: PieceId, vertex: Vertex },
    #[error("band width must be positive")]
    ZeroWidth,
    #[error("piece {piece}: coloring has {got} entries for {expected} vertices")]
    WrongLength { piece: PieceId, expected: usize, got: usize },
    #[error("piece {piece}: color {color} outside 0..={n}")]
    ColorOutOfRange { piece: PieceId, color: u32, n: u32 },
    #[error("piece {piece}: measured magnitude {measured} exceeds declared f(r) = {declared} (witness {witness:?})")]
    Uncertified { piece: PieceId, measured: u32, declared: u32, witness: (Vertex, Vertex) },
    #[error("invalid scale setup: {0}")]
    Setup(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForgeError {
    #[error("infeasible forge parameters: {0}")]
    Infeasible(String),
    #[error("bad template `{0}`")]
    BadTemplate(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}
