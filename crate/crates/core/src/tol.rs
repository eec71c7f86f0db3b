//! Numeric tolerances shared by the oracle, rank and leaf computations.

/// Relative agreement between exact polynomials and floating traces.
pub const SYMBOLIC_NUMERIC: f64 = 1e-8;

/// Relation residual `|t5^2 - P t5 + Q| <= RELATION * (1 + |t5|^2)`.
pub const RELATION: f64 = 1e-6;

/// Singular values below `RANK * sigma_max` count as zero.
pub const RANK: f64 = 1e-8;

/// `|P^2 - 4Q|` or a retained singular value below this flags a point non-generic.
pub const SINGULARITY: f64 = 1e-6;

/// `|det - 1|` for sampled unimodular matrices.
pub const DETERMINANT: f64 = 1e-10;

/// Samples below this `|det|` are rejected before normalization.
pub const MIN_ABS_DET: f64 = 0.05;
