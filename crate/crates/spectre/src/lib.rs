pub mod causal_order;
pub mod connes_distance;
pub mod dixmier;
pub mod error;
pub mod gelfand;
pub mod io;
pub mod krein_temporal;
pub mod lorentzian;
pub mod numerics;
pub mod report;
pub mod spectral_triple;

pub use error::{Error, Result};

/// Guide chapters, compiled so their examples run as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/spectral_triples.md")]
    pub mod spectral_triples {}
    #[doc = include_str!("../../../book/src/connes_distance.md")]
    pub mod connes_distance {}
    #[doc = include_str!("../../../book/src/dixmier.md")]
    pub mod dixmier {}
    #[doc = include_str!("../../../book/src/lorentzian.md")]
    pub mod lorentzian {}
    #[doc = include_str!("../../../book/src/krein_temporal.md")]
    pub mod krein_temporal {}
    #[doc = include_str!("../../../book/src/causal_order.md")]
    pub mod causal_order {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
