//! Numerical laboratory for Kostlan random real projective plane curves.
//!
//! A degree-d Kostlan polynomial is a random real homogeneous polynomial in
//! three variables whose monomial coefficients are independent Gaussians with
//! variance 1/‖X^𝐢‖²₂, where ‖·‖₂ is the L² norm induced by the Fubini-Study
//! metric on ℂP². Its real zero set is a random curve in ℝP² whose topology
//! (nested ovals, many components, separated marked points) this crate probes
//! with deterministic reference curves, barrier-method stability certificates,
//! and reproducible Monte Carlo experiments.
//!
//! Module map:
//!
//! * [`projgeom`]: projective points, Fubini-Study distance and ball volumes,
//!   rotations, deterministic ball packings, triangulated sphere grids.
//! * [`poly`]: sparse homogeneous polynomials, evaluation, L² inner products
//!   with exact monomial norms, rotation of polynomials, text serialization.
//! * [`kostlan`]: seeded samplers for the Kostlan ensemble (full space, unit
//!   sphere, hyperplane sections) and univariate real-root counting.
//! * [`reference`]: Chebyshev polynomials and the three reference curves:
//!   a single small oval, a deep nest of circles, and a union of far-apart
//!   small ovals; plus lower bounds for their pointwise norms on the relevant
//!   boundary circles.
//! * [`barrier`]: ball-averaged norms, the local sup bound factor, the
//!   perturbation threshold m(d), probability lower bounds, Bergman-kernel
//!   diagnostics, and sup-norm estimation on grids.
//! * [`topology`]: ray-parity annulus classes, marching-squares component
//!   extraction, nesting depth, and flood-fill separation classes on ℝP².
//! * [`experiments`]: reproducible experiment runners behind the CLI
//!   (`bounds`, `large-components`, `nests`, `separation`, `supnorm-tail`,
//!   `univariate-roots`, `barrier-stability`) writing trials.csv,
//!   summary.json and report.md.
//!
//! Each major capability has a runnable example; start with
//! `cargo run --example fs_geometry` and see `examples/` for the rest.

pub mod barrier;
pub mod experiments;
pub mod kostlan;
pub mod poly;
pub mod projgeom;
pub mod reference;
pub mod topology;
