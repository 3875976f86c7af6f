//! Cross-recurrence quantification analysis (CRQA) of paired categorical or
//! continuous time series.
//!
//! The pipeline normalizes and delay-embeds both series, thresholds their
//! Euclidean distances into a [`RecurrencePlot`], and extracts line-based
//! measures ([`CrqaMeasures`]). Alongside it live diagonal-wise and windowed
//! recurrence profiles, contingency-table recurrence and phi profiles for
//! categorical data, a parameter search, a coupled-dyad simulator and a
//! benchmark harness.

pub mod benchmark;
pub mod categorical;
pub mod embedding;
pub mod error;
pub mod lines;
pub mod measures;
pub mod optimize;
pub mod oracle;
pub mod plot;
pub mod profiles;
pub mod series;
pub mod simulator;

pub use categorical::{calcphi, contingency_table, ctcrqa, ContingencyTable};
pub use embedding::{EmbeddingParams, Normalization, Rescale};
pub use error::{CrqaError, Result};
pub use lines::{LineHistogram, Orientation, WhiteLines};
pub use measures::{crqa, crqa_from_plot, windowed_crqa, CrqaMeasures, CrqaOutput, CrqaParams};
pub use optimize::{optimize_param, OptimalParams, OptimizeConfig};
pub use plot::RecurrencePlot;
pub use profiles::{cross_correlation, drpdfromts, windowdrp, ProfileAxis, RecurrenceProfile};
pub use series::{SeriesKind, TimeSeries};
pub use simulator::{simulate_dyad, DyadParams};
