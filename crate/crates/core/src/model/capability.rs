//! The ordered set of structural degrees of freedom and its projector.

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};

/// The system capabilities: every filled entry of the system concept, in
/// ascending vectorized index, together with the projection matrix that
/// collapses the vectorized `sigma(P)*sigma(R)` space onto them.
///
/// The vectorized index of capability `(w, v)` is `chi = n_processes*v + w`
/// (0-based), the column-major stacking of the system concept.
#[derive(Debug, Clone, PartialEq)]
pub struct CapabilitySet {
    order: Vec<(usize, usize)>,
    projector: BoolMatrix,
    n_processes: usize,
    n_resources: usize,
}

impl CapabilitySet {
    /// Enumerates the capabilities of a system concept `A_S`.
    pub fn from_concept(a_s: &BoolMatrix) -> Self {
        let n_processes = a_s.n_rows();
        let n_resources = a_s.n_cols();
        let mut order: Vec<(usize, usize)> = a_s.iter().collect();
        // Ascending chi means resource-major order.
        order.sort_unstable_by_key(|&(w, v)| (v, w));
        let projector = BoolMatrix::from_entries(
            order.len(),
            n_processes * n_resources,
            order
                .iter()
                .enumerate()
                .map(|(psi, &(w, v))| (psi, n_processes * v + w)),
        )
        .expect("capability coordinates are in range by construction");
        CapabilitySet {
            order,
            projector,
            n_processes,
            n_resources,
        }
    }

    /// Number of capabilities, `sigma(E_S)`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The `(process, resource)` pair of capability `psi`.
    pub fn pair(&self, psi: usize) -> (usize, usize) {
        self.order[psi]
    }

    /// Capabilities in ascending vectorized order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.order.iter().copied()
    }

    /// Vectorized index of capability `psi`.
    pub fn chi(&self, psi: usize) -> usize {
        let (w, v) = self.order[psi];
        self.n_processes * v + w
    }

    /// Capability index for a `(process, resource)` pair, if present.
    pub fn psi_of(&self, w: usize, v: usize) -> Option<usize> {
        self.order
            .binary_search_by_key(&(v, w), |&(w2, v2)| (v2, w2))
            .ok()
    }

    /// The projector `P_S` with one elementary basis row per capability.
    pub fn projector(&self) -> &BoolMatrix {
        &self.projector
    }

    pub fn n_processes(&self) -> usize {
        self.n_processes
    }

    pub fn n_resources(&self) -> usize {
        self.n_resources
    }

    /// Checks `P_S * A_S^V = ones` against the concept this set claims to
    /// describe.
    pub fn verify_against(&self, a_s: &BoolMatrix) -> Result<()> {
        if a_s.shape() != (self.n_processes, self.n_resources) {
            return Err(Error::ProjectorMismatch(format!(
                "concept is {}x{}, capability set was built over {}x{}",
                a_s.n_rows(),
                a_s.n_cols(),
                self.n_processes,
                self.n_resources
            )));
        }
        let selected = self.projector.matmul(&a_s.vectorize())?;
        if selected.count_ones() != self.len() || a_s.count_ones() != self.len() {
            return Err(Error::ProjectorMismatch(
                "projector rows do not select exactly the filled concept entries".to_string(),
            ));
        }
        Ok(())
    }
}
