//! Back-of-the-envelope model of in-memory analytics clusters whose queries
//! are bound by memory bandwidth.
//!
//! Three server architectures are built in: a commodity `traditional`
//! server, a buffer-on-board `big-memory` server, and a `die-stacked` server
//! with DRAM stacked on each compute chip. Clusters can be sized to meet a
//! response-time SLA, to fit a power budget, or to hold a dataset, and then
//! compared by response time, power, capacity and energy per query.
//!
//! ```
//! use stackplan_core::{model, provision, units::Seconds};
//!
//! let (cfg, shared) = model::preset_system("die-stacked").unwrap();
//! let work = model::WorkloadSpec::reference();
//! let r = provision::provision_performance(&cfg, &shared, &work, Seconds(0.01)).unwrap();
//! assert!(r.metrics.response_time.get() <= 0.01);
//! assert_eq!(r.design.blades, 228);
//! ```

#![forbid(unsafe_code)]

pub mod analysis;
pub mod config;
mod error;
pub mod model;
pub mod provision;
pub mod query;
pub mod report;
pub mod units;

pub use error::{Error, ErrorCode, Result};
