//! Binary recurrence toolkit.
//!
//! Exact and certified computation around Lucas sequences (Fibonacci,
//! Lucas, Pell, Pell companion, and custom pairs): integer arithmetic
//! helpers, appearance orders of primes, certified interval real
//! arithmetic, lower bounds for linear forms in logarithms, continued
//! fraction reduction, and certificate-emitting Diophantine scans.

pub mod appearance;
pub mod arith;
pub mod cert;
pub mod cfrac;
pub mod expr;
pub mod linforms;
pub mod lucas;
pub mod real;
pub mod solvers;
