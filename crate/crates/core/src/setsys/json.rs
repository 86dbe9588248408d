use serde::{Deserialize, Serialize};

use super::subset::{GroundSet, Subset};
use super::system::SetSystem;
use crate::error::Result;

/// External form of a set system: `{"n": 3, "members": [[1,2],[2,3]]}` with
/// 1-based sorted labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSystemDoc {
    pub n: usize,
    pub members: Vec<Vec<usize>>,
}

impl SetSystemDoc {
    pub fn to_system(&self) -> Result<SetSystem> {
        let ground = GroundSet::explicit(self.n)?;
        let mut s = SetSystem::empty(ground)?;
        for labels in &self.members {
            s.insert(Subset::from_one_based(labels, ground)?);
        }
        Ok(s)
    }
}

impl From<&SetSystem> for SetSystemDoc {
    fn from(s: &SetSystem) -> Self {
        SetSystemDoc {
            n: s.n(),
            members: s.canonical_members().into_iter().map(Subset::to_one_based).collect(),
        }
    }
}

/// 1-based sorted labels.
impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(serializer)
    }
}

impl Serialize for SetSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SetSystem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = SetSystemDoc::deserialize(deserializer)?;
        doc.to_system().map_err(serde::de::Error::custom)
    }
}

impl SetSystem {
    pub fn to_doc(&self) -> SetSystemDoc {
        SetSystemDoc::from(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("set system documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<SetSystem> {
        let doc: SetSystemDoc = serde_json::from_str(text)?;
        doc.to_system()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=8 {
            let s = SetSystem::random(GroundSet::new(n).unwrap(), 0.4, &mut rng).unwrap();
            let text = s.to_json();
            assert_eq!(SetSystem::from_json(&text).unwrap(), s);
            assert_eq!(SetSystem::from_json(&text).unwrap().to_json(), text);
        }
    }

    #[test]
    fn canonical_layout() {
        let s = SetSystem::from_json(r#"{"n":3,"members":[[2,3],[1,2],[]]}"#).unwrap();
        assert_eq!(s.to_json(), r#"{"n":3,"members":[[],[1,2],[2,3]]}"#);
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(SetSystem::from_json(r#"{"n":2,"members":[[3]]}"#).is_err());
        assert!(SetSystem::from_json(r#"{"n":2,"members":[[0]]}"#).is_err());
        assert!(SetSystem::from_json(r#"{"n":0,"members":[]}"#).is_err());
        assert!(SetSystem::from_json(r#"{"n":2,"members":[],"x":1}"#).is_err());
    }
}
