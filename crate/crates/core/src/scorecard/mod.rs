//! Cost model, advantage formulas and rank aggregation behind the
//! classification tables, plus the check of symbolic operation counts
//! against measured ledgers.

pub mod advantage;
pub mod boyen;
pub mod cost;
pub mod data;
pub mod measure;
pub mod opcount;
pub mod rank;
pub mod tables;

pub use advantage::{advantage_eval, AdvantageInputs};
pub use boyen::{boyen_table, BoyenTable, Family};
pub use cost::{cost_eval, CostExpr, CostTerm, ModelParams, UnitCosts};
pub use data::DataSet;
pub use opcount::{opcount_verify, Expectations, VerifyReport};
pub use rank::{property_rank, rank_aggregate, RankMatrix};
pub use tables::{render, Rendered, TableId};
