use std::collections::HashMap;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::rng::{gaussian_vector, unit_vector};
use super::{check_dim, AlgebraError, Result, Vector};

/// Index of an entity inside its story's registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntityId(pub usize);

/// How fresh entity vectors are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorMode {
    /// Orthonormalized against every vector already in the registry.
    #[default]
    Exact,
    /// Raw random unit vectors on the hypersphere.
    Sampled,
}

impl std::str::FromStr for VectorMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(VectorMode::Exact),
            "sampled" => Ok(VectorMode::Sampled),
            other => Err(format!("unknown vector mode `{other}` (expected exact|sampled)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EntityVector {
    pub id: EntityId,
    pub label: String,
    pub values: Vector,
}

/// Word ↔ vector mapping for one story.
#[derive(Debug, Clone)]
pub struct EntityRegistry {
    dim: usize,
    mode: VectorMode,
    rng: ChaCha8Rng,
    entries: Vec<EntityVector>,
    index: HashMap<String, EntityId>,
}

impl EntityRegistry {
    pub fn new(dim: usize, mode: VectorMode, rng: ChaCha8Rng) -> Self {
        Self { dim, mode, rng, entries: Vec::new(), index: HashMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> VectorMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Returns the vector registered under `label`, sampling a fresh one on
    /// first sight.
    pub fn sample_entity(&mut self, label: &str) -> Result<&EntityVector> {
        let id = self.intern(label)?;
        Ok(&self.entries[id.0])
    }

    pub fn intern(&mut self, label: &str) -> Result<EntityId> {
        if label.is_empty() {
            return Err(AlgebraError::EmptyLabel);
        }
        if let Some(&id) = self.index.get(label) {
            return Ok(id);
        }
        let values = match self.mode {
            VectorMode::Sampled => unit_vector(&mut self.rng, self.dim),
            VectorMode::Exact => {
                if self.entries.len() >= self.dim {
                    return Err(AlgebraError::RegistryFull { capacity: self.dim });
                }
                self.orthonormal_sample()
            }
        };
        let id = EntityId(self.entries.len());
        self.entries.push(EntityVector { id, label: label.to_string(), values });
        self.index.insert(label.to_string(), id);
        Ok(id)
    }

    fn orthonormal_sample(&mut self) -> Vector {
        loop {
            let mut v = gaussian_vector(&mut self.rng, self.dim);
            // Two Gram-Schmidt passes keep the residual overlap at rounding level.
            for _ in 0..2 {
                for e in &self.entries {
                    let proj = v.dot(&e.values);
                    v.axpy(-proj, &e.values, 1.0);
                }
            }
            let n = v.norm();
            if n > 1e-6 {
                return v / n;
            }
        }
    }

    pub fn id_of(&self, label: &str) -> Option<EntityId> {
        self.index.get(label).copied()
    }

    pub fn get(&self, id: EntityId) -> &EntityVector {
        &self.entries[id.0]
    }

    pub fn vector(&self, id: EntityId) -> &Vector {
        &self.entries[id.0].values
    }

    pub fn label(&self, id: EntityId) -> &str {
        &self.entries[id.0].label
    }

    pub fn iter(&self) -> impl Iterator<Item = &EntityVector> {
        self.entries.iter()
    }

    /// Draws a unit vector from the registry's stream without registering it.
    pub fn fresh_unit(&mut self) -> Vector {
        unit_vector(&mut self.rng, self.dim)
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Result of snapping a vector onto the registry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cleanup {
    pub id: EntityId,
    pub cosine: f64,
    /// Best minus second-best cosine (second-best is 0 for a singleton registry).
    pub margin: f64,
    pub runner_up: f64,
}

/// Nearest registered entity by cosine.
pub fn cleanup(v: &Vector, registry: &EntityRegistry) -> Result<Cleanup> {
    if registry.is_empty() {
        return Err(AlgebraError::EmptyRegistry);
    }
    check_dim(registry.dim(), v.len())?;
    let norm = v.norm();
    if norm == 0.0 {
        return Err(AlgebraError::ZeroVector);
    }
    let mut best = (EntityId(0), f64::NEG_INFINITY);
    let mut second = f64::NEG_INFINITY;
    for e in registry.iter() {
        let c = v.dot(&e.values) / (norm * e.values.norm());
        if c > best.1 {
            second = best.1;
            best = (e.id, c);
        } else if c > second {
            second = c;
        }
    }
    let runner_up = if second.is_finite() { second } else { 0.0 };
    Ok(Cleanup { id: best.0, cosine: best.1, margin: best.1 - runner_up, runner_up })
}
