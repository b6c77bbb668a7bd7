mod campaign;
mod majorant;
mod random;
mod region;
mod report;

pub use campaign::{
    example_sups, ratio_dominant, replay_trial, run_campaign, CampaignConfig, CampaignId, CampaignResult,
    Counterexample, ParamBox, TrialRecord, TrialVerdict, CAMPAIGN_ORDER,
};
pub use majorant::{CertifiedPolynomial, MajorantQ};
pub use random::{random_function, random_function_of_order, splitmix64, trial_seed};
pub use region::{is_simple_polyline, polyline_distance, winding_number, Region};
pub use report::{is_subordinate, lemma_condition_check, LemmaReport, SubordinationReport, Verdict};
