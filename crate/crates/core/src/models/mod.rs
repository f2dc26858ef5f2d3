//! Concrete solvable models that feed the confluent machinery.

mod free;
mod lame;

pub use free::{
    free_partner_closed_form, poschl_teller, poschl_teller_d, FreeParticleSeed, Orientation,
};
pub use lame::{
    lame_bands, lame_delta_from_energy, lame_partner_closed_form, lame_potential, BlochBranch,
    LameSeed, SpectralRegion, SpectrumBands,
};
