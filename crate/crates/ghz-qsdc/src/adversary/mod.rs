//! Quantum channel taps and the two attack models.
//!
//! The session pipes every particle transmission through a [`ChannelTap`]:
//! once on the forward leg (Alice to party) and once on the backward leg
//! (party back to Alice). A tap sees only the particle in transit — the
//! label, group id, destination party, and the quantum registry — plus the
//! public announcements; it never sees Alice's private preparation records
//! or anyone's message plan.
//!
//! [`InterceptResend`] substitutes fresh known particles on the way out,
//! measures the encoded fakes on the way back, and re-encodes the inferred
//! operations onto the stored genuine particles, so the session completes
//! and only the correlation check can catch her. [`Disturbance`] tampers
//! with returning particles (a random I/iY, a forced iY, or a Z
//! measurement) without learning anything; the reveal check exists to
//! catch exactly this.

mod disturbance;
mod intercept;
mod report;

pub use disturbance::{Disturbance, DisturbanceConfig, DisturbanceMode};
pub use intercept::{FakePrep, InterceptResend, InterceptResendConfig};
pub use report::{eve_information, EveAction, EveBits, EveDibits, EveInformation, EveReport, PartyRecovery};

use serde::{Deserialize, Serialize};

use crate::protocol::{Announcement, PartyId};
use crate::quantum::{QuantumRegistry, QubitLabel};
use crate::rng::StreamRng;

/// The channel dropped a particle. Surfaces as a session error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelRefusal;

/// A tap on the quantum channel. Handlers may substitute the transmitted
/// label (returning a different live label from the registry) but must
/// keep the registry's subsystems label-disjoint.
pub trait ChannelTap {
    /// A particle in transit from Alice to `party`.
    fn forward(
        &mut self,
        party: PartyId,
        group: u32,
        label: QubitLabel,
        registry: &mut QuantumRegistry,
    ) -> Result<QubitLabel, ChannelRefusal>;

    /// An encoded particle in transit from `party` back to Alice.
    fn backward(
        &mut self,
        party: PartyId,
        group: u32,
        label: QubitLabel,
        registry: &mut QuantumRegistry,
    ) -> Result<QubitLabel, ChannelRefusal>;

    /// Alice's public announcements, broadcast to everyone including the
    /// adversary.
    fn observe_announcements(&mut self, _announcements: &[Announcement]) {}

    /// The adversary's accumulated knowledge, if any.
    fn report(&self) -> Option<EveReport> {
        None
    }
}

/// The identity channel: every particle passes untouched.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullChannel;

impl NullChannel {
    pub fn new() -> Self {
        NullChannel
    }
}

impl ChannelTap for NullChannel {
    fn forward(
        &mut self,
        _party: PartyId,
        _group: u32,
        label: QubitLabel,
        _registry: &mut QuantumRegistry,
    ) -> Result<QubitLabel, ChannelRefusal> {
        Ok(label)
    }

    fn backward(
        &mut self,
        _party: PartyId,
        _group: u32,
        label: QubitLabel,
        _registry: &mut QuantumRegistry,
    ) -> Result<QubitLabel, ChannelRefusal> {
        Ok(label)
    }
}

/// Which adversary (if any) taps the channel of a session or experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdversarySpec {
    None,
    InterceptResend(InterceptResendConfig),
    Disturbance(DisturbanceConfig),
}

impl AdversarySpec {
    pub fn validate(&self) -> Result<(), String> {
        match self {
            AdversarySpec::None => Ok(()),
            AdversarySpec::InterceptResend(cfg) => cfg.validate(),
            AdversarySpec::Disturbance(cfg) => cfg.validate(),
        }
    }

    /// Instantiate the tap with its own private randomness stream.
    pub fn build(&self, rng: StreamRng) -> Box<dyn ChannelTap> {
        match self {
            AdversarySpec::None => Box::new(NullChannel),
            AdversarySpec::InterceptResend(cfg) => Box::new(InterceptResend::new(cfg.clone(), rng)),
            AdversarySpec::Disturbance(cfg) => Box::new(Disturbance::new(cfg.clone(), rng)),
        }
    }
}
