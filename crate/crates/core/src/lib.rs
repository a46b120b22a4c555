//! Quantitative bipolar argumentation graphs (QBAGs), DFQuAD evaluation,
//! and safety, liveness and fairness analysis of topic arguments across
//! chains of QBAGs.
//!
//! The library is generic over the strength scalar. Use the `Exact*`
//! aliases when threshold comparisons must be reliable (decimal inputs are
//! read as exact rationals), or the `Float*` aliases for plain `f64`.
//!
//! ```
//! use qbag_core::{ExactQbag, Rational, Scalar, Semantics, evaluate};
//!
//! let r = |s: &str| Rational::from_decimal_str(s).unwrap();
//! let g: ExactQbag = ExactQbag::builder()
//!     .argument("a", r("0.5"))
//!     .argument("c", r("0.2"))
//!     .support("c", "a")
//!     .build()
//!     .unwrap();
//! let strengths = evaluate(&g, &Semantics::Dfquad).unwrap();
//! assert_eq!(strengths.get("a"), Some(&r("0.6")));
//! ```

pub mod chain;
pub mod error;
pub mod graph;
pub mod io;
pub mod scalar;
pub mod semantics;
pub mod slf;

pub use chain::{linspace, sweep_chain, Chain, StrengthMatrix, TopicSet};
pub use error::{Error, Result};
pub use graph::{ArgumentId, Edge, Qbag, QbagBuilder};
pub use scalar::{format_significant, Rational, Scalar};
pub use semantics::{
    dfquad_aggregation, dfquad_influence, evaluate, ModularSemantics, Semantics,
    StrengthAssignment,
};
pub use slf::{FairnessReport, SlfQuery};

pub type ExactQbag = Qbag<Rational>;
pub type ExactChain = Chain<Rational>;
pub type ExactStrengthMatrix = StrengthMatrix<Rational>;
pub type ExactStrengthAssignment = StrengthAssignment<Rational>;
pub type ExactQuery = SlfQuery<Rational>;

pub type FloatQbag = Qbag<f64>;
pub type FloatChain = Chain<f64>;
pub type FloatStrengthMatrix = StrengthMatrix<f64>;
pub type FloatStrengthAssignment = StrengthAssignment<f64>;
pub type FloatQuery = SlfQuery<f64>;
