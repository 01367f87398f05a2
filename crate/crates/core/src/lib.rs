//! Slope stability of Hodge systems `(E = ⊕ E_i, θ)` built from symmetric
//! powers of the cotangent bundle, with exact rational arithmetic.
//!
//! * [`bundle`]: numerical bundle data, slopes, subsheaf degree bounds
//! * [`hodge`]: Hodge systems, the closed-form slope, the two criteria
//! * [`inequalities`]: Chebyshev-type sum inequalities
//! * [`search`]: exhaustive θ-invariant profile search
//! * [`hn`]: Harder–Narasimhan profiles under tensor products
//! * [`oper`]: generalized opers and connections
//! * [`gallery`]: worked examples on curves
//! * [`cli`]: the command-line front end

pub mod bundle;
pub mod cli;
pub mod error;
pub mod gallery;
pub mod hn;
pub mod hodge;
pub mod inequalities;
pub mod oper;
pub mod profile;
pub mod rational;
pub mod search;
pub mod verdict;

pub use bundle::{BundleData, GeometricContext, SubsheafBound};
pub use error::{Error, Result};
pub use hodge::{HodgeSystem, ThetaMode};
pub use profile::SubsystemProfile;
pub use rational::Rational;
pub use search::{ConstraintMode, SearchOptions};
pub use verdict::{Answer, Certificate, Verdict};
