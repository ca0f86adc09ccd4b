use std::path::Path;

use pdfa_core::{Corpus, DbscanParams, FeatureSubset, RadiusPolicy, SubgoalConfig};
use serde::{Deserialize, Serialize};

use super::Error;

/// Sidecar configuration for a demonstration file.
///
/// ```toml
/// features = ["red.x", "red.y", "red.z"]
/// candidates = [[0, 1, 2]]
/// radius = 0.03            # or "max-member"
/// seed = 7
///
/// [dbscan]
/// eps = 0.05
/// min_pts = 10
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Feature names; their count is the state dimension.
    pub features: Vec<String>,
    /// Candidate feature subsets as index lists. Defaults to all features.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<RadiusSetting>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "DbscanSection::is_empty")]
    pub dbscan: DbscanSection,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DbscanSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_pts: Option<usize>,
}

impl DbscanSection {
    fn is_empty(&self) -> bool {
        self.eps.is_none() && self.min_pts.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiusSetting {
    Fixed(f64),
    Named(RadiusName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusName {
    MaxMember,
}

impl RadiusSetting {
    pub const MAX_MEMBER: Self = RadiusSetting::Named(RadiusName::MaxMember);

    pub fn policy(self) -> RadiusPolicy {
        match self {
            RadiusSetting::Fixed(r) => RadiusPolicy::Fixed(r),
            RadiusSetting::Named(RadiusName::MaxMember) => RadiusPolicy::MaxMember,
        }
    }
}

impl std::str::FromStr for RadiusSetting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "max-member" {
            return Ok(Self::MAX_MEMBER);
        }
        match s.parse::<f64>() {
            Ok(r) if r.is_finite() && r > 0.0 => Ok(RadiusSetting::Fixed(r)),
            _ => Err(format!("expected a positive radius or `max-member`, found {s:?}")),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let config: RunConfig = toml::from_str(text)?;
        config.candidate_subsets()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        super::load_with(path, Self::parse)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn num_features(&self) -> usize {
        self.features.len()
    }

    /// The declared candidate subsets, numbered in declaration order.
    pub fn candidate_subsets(&self) -> Result<Vec<FeatureSubset>, Error> {
        let n = self.num_features();
        if self.candidates.is_empty() {
            return FeatureSubset::full(0, n).map(|s| vec![s]).map_err(|e| Error::invalid(format!("candidates: {e}")));
        }
        self.candidates
            .iter()
            .enumerate()
            .map(|(id, idx)| {
                let s =
                    FeatureSubset::new(id, idx.clone()).map_err(|e| Error::invalid(format!("candidate {id}: {e}")))?;
                s.check(n).map_err(|e| Error::invalid(format!("candidate {id}: {e}")))?;
                Ok(s)
            })
            .collect()
    }

    /// Clustering settings for `corpus`: configured values where present,
    /// defaults otherwise.
    pub fn subgoal_config(&self, corpus: &Corpus) -> Result<SubgoalConfig, Error> {
        let defaults = DbscanParams::for_corpus(corpus.len());
        let eps = self.dbscan.eps.unwrap_or(defaults.eps());
        let min_pts = self.dbscan.min_pts.unwrap_or(defaults.min_pts());
        let dbscan = DbscanParams::new(eps, min_pts).map_err(|e| Error::invalid(e.to_string()))?;
        Ok(SubgoalConfig { dbscan, radius: self.radius.map(RadiusSetting::policy).unwrap_or_default() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_example() {
        let text = r#"
            features = ["a", "b", "c"]
            candidates = [[0, 1], [2]]
            radius = "max-member"
            seed = 4
            [dbscan]
            eps = 0.1
        "#;
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.candidate_subsets().unwrap().len(), 2);
        assert_eq!(c.radius, Some(RadiusSetting::MAX_MEMBER));
        assert_eq!(c.dbscan.eps, Some(0.1));
        assert_eq!(RunConfig::parse(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn defaults_to_one_full_subset() {
        let c = RunConfig::parse("features = [\"x\", \"y\"]\nradius = 0.2").unwrap();
        let subsets = c.candidate_subsets().unwrap();
        assert_eq!(subsets[0].indices(), &[0, 1]);
        assert_eq!(c.radius, Some(RadiusSetting::Fixed(0.2)));
    }

    #[test]
    fn bad_candidates_rejected() {
        for text in [
            "features = [\"x\"]\ncandidates = [[1]]",
            "features = [\"x\", \"y\"]\ncandidates = [[1, 0]]",
            "features = [\"x\"]\ncandidates = [[]]",
            "features = [\"x\"]\nunknown = 1",
        ] {
            assert!(RunConfig::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn radius_from_flag() {
        assert_eq!("0.5".parse::<RadiusSetting>(), Ok(RadiusSetting::Fixed(0.5)));
        assert_eq!("max-member".parse::<RadiusSetting>(), Ok(RadiusSetting::MAX_MEMBER));
        assert!("-1".parse::<RadiusSetting>().is_err());
        assert!("nan".parse::<RadiusSetting>().is_err());
    }
}
