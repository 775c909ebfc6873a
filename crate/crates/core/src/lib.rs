//! Entropy conditions for scalar quasilinear first-order equations in two
//! base dimensions, built on the projective geometry of the plane.
//!
//! The crate has six subsystems:
//!
//! * [`projgeom`] — exact projective geometry of the line and the plane:
//!   homogeneous points, cross-ratio, harmonic conjugates, charts, lifted
//!   projective maps and the second-order jet test for projectivity.
//! * [`exprcalc`] — a small expression language with an exact second-order
//!   forward-mode differentiator; coefficient functions, sections, chart
//!   changes and test densities are all expressions.
//! * [`density`] — entropy densities restricted to a fiber of the projective
//!   line: chart transforms, barycenters, the nine positivity
//!   characterizations, barycentric-map axioms and reconstruction of a
//!   density from its barycentric map.
//! * [`kruzhkov`] — the variational functionals `I`, `J`, `C` in standard
//!   coordinates, their disintegration, Rankine–Hugoniot residuals and shock
//!   admissibility checks.
//! * [`projstruct`] — projective connections in 2D: the trace projection,
//!   the cubic coefficient isomorphism, chart transforms, flatness residuals,
//!   characteristic tracing and the reduction-to-Burgers pipeline.
//! * [`mobius`] — the canonical entropy density on the Möbius band and the
//!   explicit entropic solution assembled from conic arcs and line pencils,
//!   with a full verifier.

pub mod corpus;
pub mod density;
pub mod exprcalc;
pub mod kruzhkov;
pub mod mobius;
pub mod projgeom;
pub mod projstruct;
pub mod quad;
pub mod report;
