//! Exact computer algebra for 3-component C*-wall-crossing geometries:
//! toric cohomology rings, Kirwan maps and cohomology decompositions, shift
//! operators on restriction triples, Fourier-transform leading terms, and the
//! predicted quantum Euler-field spectrum with an independent Fano-toric
//! quantum-ring oracle.

pub mod decomp;
pub mod equivariant;
pub mod fan;
pub mod geometry;
pub mod linalg;
pub mod ring;
pub mod tower;
