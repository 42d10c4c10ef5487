//! The weighted output sample and its measure.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::geometry::PointSet;
use crate::numeric::Rat;
use crate::ranges::MemberSet;

/// The construction's output: chosen light objects at unit weight plus heavy
/// objects at the inclusion probability, measured against `keep_prob · |F|`.
#[derive(Debug, Clone)]
pub struct WeightedSample {
    /// Size of the original ground set.
    pub ground_n: u32,
    /// Ascending ground indices of the intermediate sample F.
    pub base_indices: Vec<u32>,
    /// F as points, ordered like `base_indices`.
    pub base: PointSet,
    /// Heavy objects, as F-local indices.
    pub heavy: MemberSet,
    /// Light objects, as F-local indices.
    pub light: MemberSet,
    /// Chosen light objects, as F-local indices.
    pub chosen_light: MemberSet,
    /// Inclusion probability of the light objects.
    pub keep_prob: Rat,
}

impl WeightedSample {
    /// Size of the intermediate sample.
    pub fn f_size(&self) -> u32 {
        self.base_indices.len() as u32
    }

    /// Objects with positive weight, as F-local indices.
    pub fn support(&self) -> MemberSet {
        self.heavy.union(&self.chosen_light)
    }

    /// Number of objects with positive weight.
    pub fn support_size(&self) -> u32 {
        self.heavy.len() + self.chosen_light.len()
    }

    /// Weight of one object: 1 if chosen light, `keep_prob` if heavy, else 0.
    pub fn weight_of(&self, f_local: u32) -> Rat {
        if self.chosen_light.contains(f_local) {
            Rat::from_integer(1)
        } else if self.heavy.contains(f_local) {
            self.keep_prob.clone()
        } else {
            Rat::zero()
        }
    }

    /// The measure denominator `keep_prob · |F|`.
    pub fn denominator(&self) -> Rat {
        &self.keep_prob * Rat::from_integer(self.f_size() as i128)
    }

    /// Maps a set of F-local indices to ground indices.
    pub fn to_ground(&self, local: &MemberSet) -> MemberSet {
        MemberSet::from_indices(
            self.ground_n,
            local.iter().map(|i| self.base_indices[i as usize]),
        )
    }

    /// The support as ground indices.
    pub fn ground_support(&self) -> MemberSet {
        self.to_ground(&self.support())
    }
}

/// Exact weighted measure of a set of F-local indices:
/// `(|members ∩ chosen| + keep_prob · |members ∩ heavy|) / (keep_prob · |F|)`.
pub fn weighted_measure(sample: &WeightedSample, members: &MemberSet) -> Rat {
    let chosen = members.intersection_count(&sample.chosen_light) as i128;
    let heavy = members.intersection_count(&sample.heavy) as i128;
    let numerator = Rat::from_integer(chosen) + &sample.keep_prob * Rat::from_integer(heavy);
    numerator / sample.denominator()
}
