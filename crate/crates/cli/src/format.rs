//! JSON file formats for instances and allocation problems.
//!
//! An instance file carries the bidders (with optional quality, weights, and
//! excludability), the CTR matrix, the position count, and the reserve
//! price. An optional `mask` bitstring, aligned with the listed bidder
//! order, overrides the per-bidder excludable flags. A file whose top level
//! contains a `queries` array is an allocation problem: per-query volumes
//! wrapped around instances, plus budgets and the objective flavor.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use slatepath::colgen::{
    BudgetedBidder, ColGenObjective, ColGenProblem, ColGenQuery,
};
use slatepath::model::{Bidder, QueryInstance};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Model(#[from] slatepath::ModelError),
    #[error(transparent)]
    Solve(#[from] slatepath::SolveError),
    #[error(transparent)]
    ColGen(#[from] slatepath::colgen::ColGenError),
    #[error("mask bitstring has {len} bits for {bidders} bidders")]
    MaskLength { len: usize, bidders: usize },
    #[error("unknown objective {0:?}; expected \"revenue\" or \"bid_value\"")]
    UnknownObjective(String),
}

fn default_quality() -> f64 {
    1.0
}

fn default_rho() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BidderFile {
    pub id: String,
    pub bid: f64,
    #[serde(default = "default_quality")]
    pub quality: f64,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default = "default_true")]
    pub excludable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub positions: usize,
    pub min_bid: f64,
    pub bidders: Vec<BidderFile>,
    pub ctr: Vec<Vec<f64>>,
    /// Optional bitstring over the listed bidders: 1 = excludable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetFile {
    pub id: String,
    pub budget: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QueryFile {
    pub volume: f64,
    pub instance: InstanceFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    /// "revenue" or "bid_value".
    #[serde(default = "default_objective")]
    pub objective: String,
    #[serde(default)]
    pub unbudgeted_excludable: bool,
    pub budgets: Vec<BudgetFile>,
    pub queries: Vec<QueryFile>,
}

fn default_objective() -> String {
    "revenue".to_string()
}

#[derive(Debug)]
pub enum Loaded {
    Instance(QueryInstance),
    Problem(ColGenProblem),
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<QueryInstance, LoadError> {
        let mut excludable: Vec<bool> = self.bidders.iter().map(|b| b.excludable).collect();
        if let Some(mask) = &self.mask {
            let bits = slatepath::Mask::from_bitstring(mask)?;
            if bits.len() != self.bidders.len() {
                return Err(LoadError::MaskLength {
                    len: bits.len(),
                    bidders: self.bidders.len(),
                });
            }
            for (i, flag) in excludable.iter_mut().enumerate() {
                *flag = bits.excludable(i + 1);
            }
        }
        let bidders: Vec<Bidder> = self
            .bidders
            .into_iter()
            .zip(excludable)
            .map(|(b, excludable)| Bidder {
                id: b.id,
                bid: b.bid,
                quality: b.quality,
                utility_factor: b.rho,
                hybrid_weight: b.mu,
                excludable,
            })
            .collect();
        Ok(QueryInstance::validate_and_rank(
            bidders,
            self.ctr,
            self.positions,
            self.min_bid,
        )?)
    }

    /// Snapshot of a validated instance, bidders in ranked order. The mask
    /// field is omitted: excludability lives on the bidders.
    pub fn from_instance(instance: &QueryInstance) -> Self {
        InstanceFile {
            positions: instance.positions(),
            min_bid: instance.min_bid(),
            bidders: instance
                .bidders()
                .iter()
                .map(|b| BidderFile {
                    id: b.id.clone(),
                    bid: b.bid,
                    quality: b.quality,
                    rho: b.utility_factor,
                    mu: b.hybrid_weight,
                    excludable: b.excludable,
                })
                .collect(),
            ctr: instance.ctr_rows(),
            mask: None,
        }
    }
}

impl ProblemFile {
    pub fn into_problem(self) -> Result<ColGenProblem, LoadError> {
        let objective = match self.objective.as_str() {
            "revenue" => ColGenObjective::Revenue,
            "bid_value" => ColGenObjective::BidValue,
            other => return Err(LoadError::UnknownObjective(other.to_string())),
        };
        let queries = self
            .queries
            .into_iter()
            .map(|q| {
                Ok(ColGenQuery {
                    volume: q.volume,
                    instance: q.instance.into_instance()?,
                })
            })
            .collect::<Result<Vec<_>, LoadError>>()?;
        let budgets = self
            .budgets
            .into_iter()
            .map(|b| BudgetedBidder {
                id: b.id,
                budget: b.budget,
            })
            .collect();
        Ok(ColGenProblem::with_unbudgeted_excludable(
            queries,
            budgets,
            objective,
            self.unbudgeted_excludable,
        )?)
    }
}

/// Loads either file flavor, keyed on the presence of a top-level `queries`
/// array.
pub fn load_file(path: &Path) -> Result<Loaded, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|source| LoadError::Parse {
            path: path.display().to_string(),
            source,
        })?;
    if value.get("queries").is_some() {
        let file: ProblemFile =
            serde_json::from_value(value).map_err(|source| LoadError::Parse {
                path: path.display().to_string(),
                source,
            })?;
        Ok(Loaded::Problem(file.into_problem()?))
    } else {
        let file: InstanceFile =
            serde_json::from_value(value).map_err(|source| LoadError::Parse {
                path: path.display().to_string(),
                source,
            })?;
        Ok(Loaded::Instance(file.into_instance()?))
    }
}

/// Serializes a validated instance back to the file format.
pub fn instance_to_json(instance: &QueryInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(instance))
        .expect("instance serializes")
}
