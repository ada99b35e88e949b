//! Clustered model estimation, tree-ensemble objective minimization and
//! offline prescription from datasets.

mod cluster;
mod ensemble;
mod prescribe;

pub use cluster::{build_clusters, cluster_candidate_lists, cme_estimate, ClusterModel};
pub use ensemble::{ensemble_eval, teoo_brute_force, teoo_minimize, Node, TeooResult, TreeEnsemble, MAX_LEAF_COMBINATIONS};
pub use prescribe::{olp_prescribe, CmpOp, Constraint, Prescription, PrescriptionDataset, Record, Value};
