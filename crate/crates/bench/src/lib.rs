//! Shared fixtures for the benchmarks.

use fewnomial_core::{assemble, plan, BlockRegistry, SparseSystem};

pub fn registry() -> BlockRegistry {
    BlockRegistry::with_builtins().expect("built-in blocks register")
}

/// The assembled system for (n, k) together with the registry it was built from.
pub fn assembled(n: usize, k: usize) -> (SparseSystem, BlockRegistry) {
    let reg = registry();
    let system = assemble(&plan(n, k, &reg).expect("supported (n, k)"));
    (system, reg)
}
