//! Lattice and half-space tools behind the polynomial complexity bound:
//! small integer relations and their lattice approximation, Hermite normal
//! forms, half-space cuts of finite point sets, and prefix counting for
//! `g_α(n) = ⌊Σ αᵢ hᵢ(n)⌋`.

mod cuts;
mod lattice;
mod prefix;
mod relations;

pub use cuts::{half_lattice_pairs, halfspace_cuts, harding_bound, CutFamily, HalfLatticeCount, MAX_POINTS};
pub use lattice::IntLattice;
pub use prefix::{
    direct_prefix, prefix_count_experiment, reconstruct_prefix, reconstruction_experiment, sample_parameters, PrefixCountReport,
    Reconstruction, ReconstructionReport, MAX_GRID,
};
pub use relations::{enumerate_relations, lattice_approx, RelationSet, SandwichCertificate, MAX_BOX};

/// `span_Z` of integer vectors of length `dim`.
pub fn span_lattice(dim: usize, vectors: &[Vec<i64>]) -> crate::Result<IntLattice> {
    IntLattice::span(dim, vectors)
}

#[cfg(test)]
mod tests;
