use serde::{Deserialize, Serialize};

use super::WorldError;

/// Index of an actor in a [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Actor(pub u8);

/// Index of an object in a [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Object(pub u8);

/// Index of a location in a [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Location(pub u8);

impl Actor {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Object {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Location {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub fn pronoun(self) -> &'static str {
        match self {
            Gender::Male => "he",
            Gender::Female => "she",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActorEntry {
    pub name: String,
    pub gender: Gender,
}

/// Maximum number of locations: location sets are 64-bit masks.
pub const MAX_LOCATIONS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub actors: Vec<ActorEntry>,
    pub objects: Vec<String>,
    pub locations: Vec<String>,
}

impl Default for Vocabulary {
    fn default() -> Self {
        let actor = |name: &str, gender| ActorEntry {
            name: name.to_string(),
            gender,
        };
        Vocabulary {
            actors: vec![
                actor("John", Gender::Male),
                actor("Mary", Gender::Female),
                actor("Daniel", Gender::Male),
                actor("Sandra", Gender::Female),
                actor("Bill", Gender::Male),
                actor("Fred", Gender::Male),
                actor("Jeff", Gender::Male),
                actor("Julie", Gender::Female),
            ],
            objects: ["apple", "football", "milk"].map(String::from).to_vec(),
            locations: [
                "park", "kitchen", "office", "bedroom", "school", "bathroom", "cinema", "garden",
                "hallway", "store",
            ]
            .map(String::from)
            .to_vec(),
        }
    }
}

impl Vocabulary {
    pub fn validate(&self) -> Result<(), WorldError> {
        let bad = |reason: String| Err(WorldError::InvalidVocabulary(reason));
        if self.actors.is_empty() || self.objects.is_empty() || self.locations.is_empty() {
            return bad("actors, objects and locations must all be non-empty".into());
        }
        if self.locations.len() < 2 {
            return bad("at least two locations are required".into());
        }
        if self.locations.len() > MAX_LOCATIONS {
            return bad(format!("at most {MAX_LOCATIONS} locations are supported"));
        }
        if self.actors.len() > 255 || self.objects.len() > 255 {
            return bad("at most 255 actors and 255 objects are supported".into());
        }
        let mut seen = std::collections::HashSet::new();
        let names = self
            .actors
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.objects.iter().map(String::as_str))
            .chain(self.locations.iter().map(String::as_str));
        for name in names {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',') {
                return bad(format!("`{name}` is not a single word"));
            }
            if !seen.insert(name) {
                return bad(format!("`{name}` is used more than once"));
            }
        }
        Ok(())
    }

    pub fn actor_name(&self, a: Actor) -> &str {
        &self.actors[a.index()].name
    }

    pub fn gender(&self, a: Actor) -> Gender {
        self.actors[a.index()].gender
    }

    pub fn object_name(&self, o: Object) -> &str {
        &self.objects[o.index()]
    }

    pub fn location_name(&self, l: Location) -> &str {
        &self.locations[l.index()]
    }

    pub fn actor(&self, name: &str) -> Option<Actor> {
        self.actors
            .iter()
            .position(|a| a.name == name)
            .map(|i| Actor(i as u8))
    }

    pub fn object(&self, name: &str) -> Option<Object> {
        self.objects
            .iter()
            .position(|o| o == name)
            .map(|i| Object(i as u8))
    }

    pub fn location(&self, name: &str) -> Option<Location> {
        self.locations
            .iter()
            .position(|l| l == name)
            .map(|i| Location(i as u8))
    }

    pub fn all_actors(&self) -> impl Iterator<Item = Actor> {
        (0..self.actors.len()).map(|i| Actor(i as u8))
    }

    pub fn all_objects(&self) -> impl Iterator<Item = Object> {
        (0..self.objects.len()).map(|i| Object(i as u8))
    }

    pub fn all_locations(&self) -> impl Iterator<Item = Location> {
        (0..self.locations.len()).map(|i| Location(i as u8))
    }

    pub fn sizes(&self) -> WorldSize {
        WorldSize {
            actors: self.actors.len(),
            objects: self.objects.len(),
            locations: self.locations.len(),
        }
    }
}

/// Entity counts, all the belief evaluator needs from a vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorldSize {
    pub actors: usize,
    pub objects: usize,
    pub locations: usize,
}
