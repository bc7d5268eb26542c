pub mod arith;
pub mod invariants;
pub mod primes;
pub mod report;
pub mod torus;
pub mod weil;
