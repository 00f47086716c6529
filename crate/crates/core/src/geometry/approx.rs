//! Approximate rendezvous from starts given to arbitrary (finite) precision.

use num_bigint::BigInt;
use num_traits::One;

use super::gt::geometric_rv;
use super::path::{dyadic_clearance, dyadic_round};
use super::{GeometryError, PlanarRoute, QPoint, Terrain};
use crate::adversary::{verify_rendezvous_planar, RendezvousReport, SuiteStrategy};
use crate::enumeration::Label;
use crate::rational::Q;
use crate::rendezvous::{Limits, RouteError};

/// Result of an approximate run, with the coarse rational proxy of the
/// second start that the closeness argument compares against.
#[derive(Debug, Clone)]
pub struct ApproxOutcome {
    pub first: PlanarRoute,
    pub second: PlanarRoute,
    pub report: RendezvousReport,
    /// A low-height dyadic point within `radius` of the second start.
    pub proxy: QPoint,
    /// `min(clearance / 2, epsilon)`, a power of two.
    pub radius: Q,
}

/// Route of an agent built in its own frame, whose origin is its start,
/// then expressed in the global frame.
pub fn own_frame_route(t: &Terrain, start: &QPoint, label: Label, limits: &Limits) -> Result<PlanarRoute, RouteError> {
    let shift = &QPoint::origin() - start;
    let local = t.translated(&shift);
    Ok(geometric_rv(&local, &QPoint::origin(), label, limits)?.translated(start))
}

/// Runs both agents from their given starts in their own frames and reports,
/// for every strategy and seed, whether they met or came within `epsilon`.
pub fn approx_rendezvous(
    t: &Terrain,
    starts: (&QPoint, &QPoint),
    labels: (Label, Label),
    epsilon: &Q,
    limits: &Limits,
    suite: &[SuiteStrategy],
    seeds: &[u64],
) -> Result<ApproxOutcome, RouteError> {
    if labels.0 == labels.1 {
        return Err(RouteError::DuplicateLabel(labels.0));
    }
    if labels.0 == 0 || labels.1 == 0 {
        return Err(RouteError::ZeroLabel);
    }
    let clearance =
        dyadic_clearance(t, starts.1).ok_or_else(|| GeometryError::StartNotInterior(Box::new(starts.1.clone())))?;
    let mut radius = clearance / Q::from(BigInt::from(2));
    let mut bits = 0u32;
    while &radius > epsilon {
        radius /= Q::from(BigInt::from(2));
    }
    while Q::new(BigInt::one(), BigInt::one() << bits) >= radius {
        bits += 1;
    }
    let proxy = dyadic_round(starts.1, bits);
    let first = own_frame_route(t, starts.0, labels.0, limits)?;
    let second = own_frame_route(t, starts.1, labels.1, limits)?;
    let report = verify_rendezvous_planar(&first, &second, suite, seeds, Some(epsilon.clone()));
    Ok(ApproxOutcome {
        first,
        second,
        report,
        proxy,
        radius,
    })
}
