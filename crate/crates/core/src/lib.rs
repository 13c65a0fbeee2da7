//! Extremal dependence of vine copulas built from extreme-value (EV) and
//! inverted extreme-value (IEV) pair copulas.
//!
//! The crate covers the whole pipeline from bivariate exponent measures to
//! the geometry of scaled sample clouds:
//!
//! * [`measure`]: logistic and asymmetric logistic exponent measures;
//! * [`copula`]: EV and IEV pair copulas with h-functions and their inverses;
//! * [`vine`]: vine specifications and their JSON form;
//! * [`gauge`]: gauge functions of limit sets for bivariate models,
//!   trivariate vines of every EV/IEV pattern, and IEV D- and C-vines;
//! * [`eta`]: coefficients of tail dependence, numerically and analytically;
//! * [`simulate`]: reproducible vine sampling on exponential margins;
//! * [`empirical`]: χ and η estimators and cloud-versus-gauge coverage;
//! * [`verify`]: self-checks used by the command-line `verify` command.

pub mod copula;
pub mod empirical;
pub mod error;
pub mod eta;
pub mod gauge;
pub mod measure;
pub mod optim;
pub mod simulate;
pub mod verify;
pub mod vine;

pub use copula::{Family, PairCopula};
pub use error::{Error, Result};
pub use eta::{EtaMethod, EtaResult};
pub use gauge::Gauge;
pub use measure::{ExponentMeasure, TailOrders};
pub use simulate::SampleCloud;
pub use vine::{EdgeLabel, Structure, VineSpec};
