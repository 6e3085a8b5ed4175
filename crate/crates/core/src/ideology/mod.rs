//! Political-leaning inference.
//!
//! Seed labels come from the media outlets an account links to (majority side wins,
//! ties dropped). Seeds are then spread over the undirected, retweet-weighted graph by
//! clamped label propagation, and the whole procedure is validated with stratified
//! k-fold cross-validation over the seeds.

mod outlets;
mod propagation;
mod seeds;
mod urls;
mod validation;

pub use outlets::{registrable_domain, MediaOutletLists};
pub use propagation::{
    propagate, AccountLeaning, LeaningMap, PropagationParams, Propagator, Provenance,
};
pub use seeds::{seed_label, SeedLabel, SeedLabels};
pub use urls::{expand_top, rank_urls, UrlResolutionCache, UrlResolver};
pub use validation::{crossvalidate, ClassScore, FoldScore, PRReport};
