//! Library side of the `mslope` command: random campaigns, report
//! rendering and SVG figures.

pub mod campaign;
pub mod report;
pub mod svg;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Plain,
}
