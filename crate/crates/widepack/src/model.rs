//! Problem instances, packings, rounding, the `reduce_k` candidate filter,
//! validity checking, JSON serialization and seeded instance generators.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Rational64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{overlaps, BBox, PlacedRect, Rect};

/// An item: a rectangle with a stable id and an optional color in `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Item {
    pub id: u32,
    pub rect: Rect,
    pub color: Option<u32>,
}

impl Item {
    pub fn new(id: u32, w: i64, h: i64) -> Self {
        Item { id, rect: Rect::new(w, h), color: None }
    }

    pub fn colored(mut self, color: u32) -> Self {
        self.color = Some(color);
        self
    }
}

/// A 2D knapsack instance: box, items and target packing size `k`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub bbox: BBox,
    pub items: Vec<Item>,
    pub k: usize,
}

impl Instance {
    pub fn new(bbox: BBox, items: Vec<Item>, k: usize) -> Result<Self> {
        if k < 1 || k > items.len() {
            return Err(Error::InvalidInstance(format!(
                "k = {k} outside 1..={}",
                items.len()
            )));
        }
        let mut seen = HashSet::new();
        for it in &items {
            if !seen.insert(it.id) {
                return Err(Error::InvalidInstance(format!("duplicate item id {}", it.id)));
            }
        }
        Ok(Instance { bbox, items, k })
    }

    pub fn item(&self, id: u32) -> Option<&Item> {
        self.items.iter().find(|it| it.id == id)
    }

    pub fn all_wide(&self) -> bool {
        self.items.iter().all(|it| it.rect.is_wide())
    }

    /// Instance with every coordinate doubled (box and item dimensions).
    pub fn doubled(&self) -> Instance {
        Instance {
            bbox: self.bbox.doubled(),
            items: self
                .items
                .iter()
                .map(|it| Item { id: it.id, rect: it.rect.doubled(), color: it.color })
                .collect(),
            k: self.k,
        }
    }
}

/// One placed item of a packing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub id: u32,
    pub at: PlacedRect,
}

/// A (candidate) solution: placements of a subset of the items.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Packing {
    pub placements: Vec<Placement>,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn ids(&self) -> Vec<u32> {
        self.placements.iter().map(|p| p.id).collect()
    }

    pub fn get(&self, id: u32) -> Option<&Placement> {
        self.placements.iter().find(|p| p.id == id)
    }
}

/// Outcome of `validate_packing`: pass, or the first violated check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub pass: bool,
    pub violation: Option<String>,
}

impl ValidationReport {
    fn pass() -> Self {
        ValidationReport { pass: true, violation: None }
    }

    fn fail(msg: String) -> Self {
        ValidationReport { pass: false, violation: Some(msg) }
    }
}

/// Checks every packing invariant: distinct ids known to the instance,
/// dimensions matching the items, containment in the box, pairwise
/// non-overlap. Violations are report entries, not errors.
pub fn validate_packing(inst: &Instance, pk: &Packing) -> ValidationReport {
    let mut seen = HashSet::new();
    for p in &pk.placements {
        if !seen.insert(p.id) {
            return ValidationReport::fail(format!("duplicate id {}", p.id));
        }
        let item = match inst.item(p.id) {
            Some(it) => it,
            None => return ValidationReport::fail(format!("unknown item id {}", p.id)),
        };
        if item.rect != p.at.rect {
            return ValidationReport::fail(format!(
                "item {} placed with dimensions {}x{}, expected {}x{}",
                p.id,
                p.at.w(),
                p.at.h(),
                item.rect.w,
                item.rect.h
            ));
        }
        if !inst.bbox.contains(&p.at) {
            return ValidationReport::fail(format!(
                "item {} at ({},{}) out of box",
                p.id, p.at.x, p.at.y
            ));
        }
    }
    for (i, a) in pk.placements.iter().enumerate() {
        for b in &pk.placements[i + 1..] {
            if overlaps(&a.at, &b.at) {
                return ValidationReport::fail(format!("items {} and {} overlap", a.id, b.id));
            }
        }
    }
    ValidationReport::pass()
}

/// Aspect ratio of the box: `max(w/h, h/w)` as an exact rational.
pub fn aspect_ratio(b: &BBox) -> Rational64 {
    let a = Rational64::new(b.w, b.h);
    let inv = Rational64::new(b.h, b.w);
    a.max(inv)
}

/// Width-rounding parameters derived from the half-width threshold `ell`.
/// The granularity is `c = max(1, floor(ell^2 / n1))`, the integer-safe
/// analogue of `ell' = ell^2 / N1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundingParams {
    pub ell: Rational64,
    pub c: i64,
}

impl RoundingParams {
    pub fn new(ell: i64, n1: i64) -> Self {
        Self::from_ratio(Rational64::from_integer(ell), n1)
    }

    pub fn from_ratio(ell: Rational64, n1: i64) -> Self {
        assert!(ell > Rational64::from_integer(0), "ell must be positive");
        let c = (ell * ell / Rational64::from_integer(n1)).floor().to_integer();
        RoundingParams { ell, c: c.max(1) }
    }
}

/// Rounds the width up to the next multiple of the granularity; the height is
/// unchanged.
pub fn round_rect(r: &Rect, p: &RoundingParams) -> Rect {
    let c = p.c;
    Rect::new(c * ((r.w + c - 1) / c), r.h)
}

/// Per (width, color) class, keeps the `k` items of smallest height, ties
/// broken by smaller id. Every item must be colored.
pub fn reduce_k(items: &[Item], k: usize) -> Result<Vec<Item>> {
    let mut classes: BTreeMap<(i64, u32), Vec<Item>> = BTreeMap::new();
    for it in items {
        let color = it
            .color
            .ok_or_else(|| Error::Coloring(format!("item {} uncolored in reduce_k", it.id)))?;
        classes.entry((it.rect.w, color)).or_default().push(*it);
    }
    let mut kept = Vec::new();
    for (_, mut class) in classes {
        class.sort_by_key(|it| (it.rect.h, it.id));
        class.truncate(k);
        kept.extend(class);
    }
    kept.sort_by_key(|it| it.id);
    Ok(kept)
}

// ---------------------------------------------------------------------------
// JSON formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct BoxJson {
    w: i64,
    h: i64,
}

#[derive(Serialize, Deserialize)]
struct ItemJson {
    id: u32,
    w: i64,
    h: i64,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    #[serde(rename = "box")]
    bbox: BoxJson,
    k: usize,
    items: Vec<ItemJson>,
}

#[derive(Serialize, Deserialize)]
struct PlacementJson {
    id: u32,
    x: i64,
    y: i64,
}

#[derive(Serialize, Deserialize)]
struct PackingJson {
    placements: Vec<PlacementJson>,
}

impl Instance {
    pub fn to_json(&self) -> String {
        let doc = InstanceJson {
            bbox: BoxJson { w: self.bbox.w, h: self.bbox.h },
            k: self.k,
            items: self
                .items
                .iter()
                .map(|it| ItemJson { id: it.id, w: it.rect.w, h: it.rect.h })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("instance serialization")
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        let doc: InstanceJson = serde_json::from_str(text)?;
        let items = doc
            .items
            .iter()
            .map(|it| Item::new(it.id, it.w, it.h))
            .collect();
        Instance::new(BBox::new(doc.bbox.w, doc.bbox.h), items, doc.k)
    }
}

impl Packing {
    pub fn to_json(&self) -> String {
        let doc = PackingJson {
            placements: self
                .placements
                .iter()
                .map(|p| PlacementJson { id: p.id, x: p.at.x, y: p.at.y })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("packing serialization")
    }

    /// Deserializes a packing, looking item dimensions up in the instance.
    pub fn from_json(text: &str, inst: &Instance) -> Result<Packing> {
        let doc: PackingJson = serde_json::from_str(text)?;
        let mut placements = Vec::new();
        for p in doc.placements {
            let item = inst
                .item(p.id)
                .ok_or_else(|| Error::InvalidInstance(format!("unknown item id {}", p.id)))?;
            placements.push(Placement { id: p.id, at: item.rect.at(p.x, p.y) });
        }
        Ok(Packing { placements })
    }
}

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

/// Parameters for the seeded instance generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenProfile {
    pub box_w: (i64, i64),
    pub box_h: (i64, i64),
    pub n_items: (usize, usize),
    /// Emit only wide items (w >= h).
    pub wide_only: bool,
    pub min_w: i64,
    pub max_w: i64,
    pub max_h: i64,
    /// Upper bound on the box aspect ratio; boxes are resampled until it holds.
    pub max_aspect: Option<i64>,
    /// Fixed k; when absent, k is drawn uniformly from `1..=n`.
    pub k: Option<usize>,
}

impl GenProfile {
    /// Small wide instances suitable for the brute-force oracle.
    pub fn desk(box_max: i64, n_max: usize) -> Self {
        GenProfile {
            box_w: (2, box_max),
            box_h: (2, box_max),
            n_items: (1, n_max),
            wide_only: true,
            min_w: 1,
            max_w: box_max,
            max_h: box_max,
            max_aspect: None,
            k: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.box_w.0 < 1 || self.box_w.0 > self.box_w.1 {
            return Err(Error::InvalidProfile("bad box width bounds".into()));
        }
        if self.box_h.0 < 1 || self.box_h.0 > self.box_h.1 {
            return Err(Error::InvalidProfile("bad box height bounds".into()));
        }
        if self.n_items.0 < 1 || self.n_items.0 > self.n_items.1 {
            return Err(Error::InvalidProfile("bad item count bounds".into()));
        }
        if self.min_w < 1 || self.min_w > self.max_w {
            return Err(Error::InvalidProfile("bad width bounds".into()));
        }
        if self.min_w > self.box_w.1 {
            return Err(Error::InvalidProfile(
                "minimum item width exceeds box width".into(),
            ));
        }
        Ok(())
    }
}

/// Deterministically generates an instance from a seed and a profile.
pub fn generate_instance(seed: u64, profile: &GenProfile) -> Result<Instance> {
    profile.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (bw, bh) = loop {
        let bw = rng.gen_range(profile.box_w.0..=profile.box_w.1);
        let bh = rng.gen_range(profile.box_h.0..=profile.box_h.1);
        match profile.max_aspect {
            Some(cap) => {
                let ar = aspect_ratio(&BBox::new(bw, bh));
                if ar <= Rational64::from_integer(cap) {
                    break (bw, bh);
                }
            }
            None => break (bw, bh),
        }
    };
    let bbox = BBox::new(bw, bh);
    let n = rng.gen_range(profile.n_items.0..=profile.n_items.1);
    let mut items = Vec::with_capacity(n);
    for id in 0..n as u32 {
        let w = rng.gen_range(profile.min_w..=profile.max_w.min(bw));
        let h_cap = if profile.wide_only { w.min(profile.max_h) } else { profile.max_h };
        let h = rng.gen_range(1..=h_cap.max(1));
        items.push(Item::new(id, w, h));
    }
    let k = match profile.k {
        Some(k) => k,
        None => rng.gen_range(1..=n),
    };
    Instance::new(bbox, items, k)
}

/// Parses an exact rational from `"p/q"` or a bare integer string.
pub fn parse_ratio(text: &str) -> Result<Rational64> {
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Error::InvalidInstance(format!("bad rational component {s:?}")))
    };
    match text.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (parse(p)?, parse(q)?);
            if q == 0 {
                return Err(Error::InvalidInstance("zero denominator".into()));
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(parse(text)?)),
    }
}

/// Helper for tests and reports: the threshold `ceil(q * k)` for rational `q`.
pub fn ceil_mul(q: Rational64, k: usize) -> i64 {
    (q * Rational64::from_integer(k as i64)).ceil().to_integer()
}

/// Colors as a map for quick lookup.
pub fn color_map(items: &[Item]) -> HashMap<u32, Option<u32>> {
    items.iter().map(|it| (it.id, it.color)).collect()
}
