use thiserror::Error;

/// Failures when reading a PD code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed token `{token}` at offset {offset}")]
    MalformedToken { token: String, offset: usize },
    #[error("malformed header line `{0}`")]
    MalformedHeader(String),
    #[error("arc label 0 is not allowed (labels are positive integers)")]
    ZeroLabel,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Structural problems with a diagram, or a violated operation precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("arc {label} is used {count} times (expected exactly 2)")]
    ArcMultiplicity { label: u32, count: usize },
    #[error("free circle arc {0} also appears in a crossing or twice as a circle")]
    FreeCircleReuse(u32),
    #[error("rotation system is not planar: component with {vertices} crossings has {faces} faces (Euler characteristic {euler}, expected 2)")]
    NonPlanar {
        vertices: usize,
        faces: usize,
        euler: i64,
    },
    #[error("face index {face} out of range ({count} faces)")]
    FaceOutOfRange { face: usize, count: usize },
    #[error("diagram is not connected")]
    Disconnected,
    #[error("crossing {0} does not exist")]
    NoSuchCrossing(usize),
    #[error("crossing {0} is already smoothed")]
    AlreadySmoothed(usize),
    #[error("crossing {0} is not splitting")]
    NotSplitting(usize),
    #[error("diagram is not R1-trivial: crossing {0} is not splitting")]
    NotR1Trivial(usize),
    #[error("word has {got} entries but the diagram has {expected} crossings")]
    WordLength { expected: usize, got: usize },
    #[error("word is not total")]
    PartialWord,
    #[error("invalid numbering: {0}")]
    InvalidNumbering(String),
    #[error("chessboard colouring failed; the rotation system is inconsistent")]
    Coloring,
    #[error("diagram carries no consistent orientation")]
    NoOrientation,
    #[error("arc {0} does not exist")]
    NoSuchArc(u32),
    #[error("not an alternating diagram")]
    NotAlternating,
    #[error("expected a knot diagram, found {0} components")]
    NotAKnot(usize),
    #[error("crossing {0} is splitting; a reduced diagram is required")]
    HasSplittingCrossing(usize),
    #[error("{0}")]
    Internal(String),
}

/// Errors raised by the chain-complex layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("differential does not square to zero ({0} nonzero entries in d∘d)")]
    NotAComplex(usize),
    #[error("entry {src} -> {tgt} changes primary degree by {delta} (expected 1)")]
    PrimaryDegree { src: usize, tgt: usize, delta: i32 },
    #[error("entry {src} -> {tgt} changes secondary degree by {delta}, not allowed by the declared homogeneity")]
    SecondaryDegree { src: usize, tgt: usize, delta: i32 },
    #[error("generator {0} not found")]
    UnknownGenerator(usize),
    #[error("duplicate generator id {0}")]
    DuplicateGenerator(usize),
    #[error("entry {src} -> {tgt} is {value}, not a unit")]
    NotUnit { src: usize, tgt: usize, value: String },
    #[error("eliminating {src} -> {tgt} would break the filtration (j {jsrc} -> {jtgt})")]
    FiltrationViolation {
        src: usize,
        tgt: usize,
        jsrc: i32,
        jtgt: i32,
    },
    #[error("complex is not j-homogeneous; use the primary-degree homology")]
    NotHomogeneous,
    #[error("map is not a chain map ({0} nonzero entries in w∘d₀ - d₁∘w)")]
    NotAChainMap(usize),
    #[error("torsion coefficient {0} exceeds the supported range")]
    TorsionTooLarge(String),
    #[error("reduction left {found} generators in block {block}, expected {expected}")]
    BlockReduction {
        block: usize,
        found: usize,
        expected: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
