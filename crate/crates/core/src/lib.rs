//! Community detection with a tunable resolution or mixing parameter, and
//! label-free selection of that parameter on synthetic LFR graphs shaped like the
//! input.
//!
//! ```
//! use commtune::{detect, Graph, Objective};
//!
//! let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
//! let r = detect(&g, &Objective::modularity(1.0).unwrap(), 7).unwrap();
//! assert_eq!(r.partition.num_communities(), 2);
//! ```

pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod lfr;
pub mod louvain;
pub mod metrics;
pub mod objective;
pub mod partition;
pub mod powerlaw;
pub mod seed;
pub mod stats;
pub mod tuner;

pub use error::{Error, Result};
pub use graph::{aggregate, mixing_fraction, Graph};
pub use lfr::{generate_lfr, LfrConfig, LfrInstance};
pub use louvain::{detect, DetectionResult};
pub use metrics::{jaccard_index, nmi, rand_index, Metric};
pub use objective::{Objective, ObjectiveKind};
pub use partition::Partition;
pub use powerlaw::LfrParams;
pub use stats::{welch_t_test, SignificanceResult};
pub use tuner::{tune, TuneConfig, TuneReport};
