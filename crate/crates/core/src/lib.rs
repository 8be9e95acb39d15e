pub mod affine;
pub mod error;
pub mod fock;
pub mod graded;
pub mod harness;
pub mod lattice;
pub mod linalg;
pub mod pool;
pub mod rational;
pub mod report;
pub mod screening;
pub mod vertex;
pub mod virasoro;

pub use affine::{AffineGenerators, Generator, UEnvWord};
pub use error::{Error, Result};
pub use fock::{parse_element, FockElement};
pub use graded::GradedSubspace;
pub use harness::{run_suite, run_suites, EvalOp, OutputFormat, Suite, SuiteConfig};
pub use lattice::{Lattice, LatticeVector};
pub use linalg::RationalMatrix;
pub use rational::Rational;
pub use report::{Check, DimEntry, GradedReport, Status};
