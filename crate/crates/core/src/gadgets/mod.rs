//! Explicit constructions: the matrix `M(n)`, the correlation inequalities,
//! the stable-set gadget `H_n`, and the 3SAT → directed Hamiltonian cycle →
//! undirected Hamiltonian cycle gadget used to embed `COR(n)` in a face of a
//! TSP polytope.

mod bitstring;
mod graph;
mod matrix_m;
mod sat;
mod stab;
mod tsp;

pub use bitstring::BitString;
pub use graph::{Digraph, Graph};
pub use matrix_m::{cor_inequalities, cor_inequality, matrix_m, matrix_n, MAX_M_SIZE};
pub use sat::{build_phi, CnfFormula, Literal};
pub use stab::{build_h, face_f, face_f_stable_sets, pi_stab_map, project_pi_stab, HLabel};
pub use tsp::{
    build_d, build_g, enumerate_tours_bounded, project_pi_tsp, tour_from_assignment,
    verify_directed_tour, verify_hamiltonian_cycle, ClauseDetour, DirectedTour, HamCycle, TourEnumeration, TspGadget,
};
