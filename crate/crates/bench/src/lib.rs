//! Deterministic inputs shared by the benchmarks.

use geomsem_core::gen::{generate, GenConfig, WorldConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A generated well-formed program with `statements` statements over a
/// world of `bodies` bodies.
pub fn program(statements: usize, bodies: usize, seed: u64) -> String {
    let cfg = GenConfig { statements, world: WorldConfig { bodies, ..WorldConfig::default() }, ..GenConfig::default() };
    generate(&mut ChaCha8Rng::seed_from_u64(seed), &cfg).text
}

/// The same program with one primitive swapped, so it carries diagnostics.
pub fn faulty_program(statements: usize, bodies: usize, seed: u64) -> String {
    let cfg = GenConfig { statements, world: WorldConfig { bodies, ..WorldConfig::default() }, ..GenConfig::default() };
    let p = generate(&mut ChaCha8Rng::seed_from_u64(seed), &cfg);
    match p.sites.first() {
        Some(site) => p.swapped(site, &site.replacements[0]),
        None => p.text,
    }
}
