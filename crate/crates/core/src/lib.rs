//! Cox quotient presentations of smooth complete toric varieties, genus-0
//! weak Δ-collections and their moduli, the collapsing map on genus-0
//! stable-map data, and the D-term (moment map) layer of the abelian gauged
//! linear sigma model.

pub mod collapse;
pub mod cox;
pub mod delta;
pub mod fan;
pub mod forms;
pub mod glsm;
pub mod json;
pub mod lattice;
pub mod lp;
pub mod moduli;

pub use collapse::{collapse, Attachment, CollapseResult, GenusZeroStableMapData, Reparametrize};
pub use cox::{cox_presentation, CoxPresentation};
pub use delta::{IsomorphismVerdict, Multidegree, WeakDeltaCollection};
pub use fan::Fan;
pub use forms::{BinaryForm, Mobius, ProjectivePoint};
pub use glsm::{GLSMProblem, SolveReport, SolveStatus, Stability};
pub use lattice::IntMatrix;
pub use moduli::ModuliSummary;
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
