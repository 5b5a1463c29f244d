//! Non-linear combination of probabilities.
//!
//! Supporting evidence is added with cMPE (`1 − Π(1 − pᵢ)`), removed again
//! with DPE (`1 − (1 − a)/Π(1 − bᵢ)`), and independent error channels are
//! multiplied with MPE. Bayes' theorem, Laplace's rule of succession and
//! support transfer sit alongside, together with:
//!
//! - [`evidence`]: tagged evidence documents and whole-document combination,
//! - [`diagnostics`]: detectors for chain overflow and non-complementary rules,
//! - [`dsl`]: a small expression language over the operators,
//! - [`oracle`]: exact enumeration over finite event spaces for verification.

pub mod combinators;
pub mod diagnostics;
pub mod dsl;
pub mod error;
pub mod evidence;
pub mod oracle;
pub mod prob;

pub use combinators::{
    bayes_implied, bayes_posterior, bayes_total, cmpe_add, cohen_binary_combine, dpe_sub,
    expansion_identity, laplace_succession, mpe_error_product, nonlinear_add_curve,
    support_transfer, BayesAlternative, BinaryVerdict, CurvePoint, Partition, SupportContribution,
};
pub use error::{CombineError, ProbabilityError};
pub use prob::{
    complement, from_log_complement, product, to_log_complement, ErrorComplement, Probability,
    RepresentationMode, Tolerance,
};
