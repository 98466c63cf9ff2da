//! Lambertian illuminance from ceiling access points and nearest-AP clustering.
//!
//! Each access point (AP) is a downward-facing generalized Lambertian emitter.
//! The illuminance a node receives from one AP is
//!
//! ```text
//! I_AP = I_v · (m + 1) / (2π d²) · cos(φ)^m
//! ```
//!
//! where `d` is the AP–node distance, `φ` the angle between the emission axis
//! (straight down) and the AP→node direction, and `m` the Lambertian index
//! derived from the radiation semi-angle. Angles are radians internally;
//! degrees only appear in [`RoomScenario::semi_angle_deg`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    fn horizontal_dist_sq(self, other: Vec3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;

    fn sub(self, other: Vec3) -> Vec3 {
        Vec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3::new(v[0], v[1], v[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

/// Emission axis of every AP: straight down.
pub const EMISSION_AXIS: Vec3 = Vec3::new(0.0, 0.0, -1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessPoint {
    pub id: u32,
    pub position: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodePosition {
    pub node_id: u32,
    pub position: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoomScenario {
    pub width_m: f64,
    pub length_m: f64,
    pub height_m: f64,
    pub aps: Vec<AccessPoint>,
    pub luminous_flux_lm: f64,
    pub semi_angle_deg: f64,
}

impl RoomScenario {
    /// 9 × 9 × 3 m room with a 3 × 3 ceiling grid of 3200 lm, 30° emitters.
    pub fn reference() -> Self {
        let mut aps = Vec::with_capacity(9);
        let mut id = 1;
        for x in [1.5, 4.5, 7.5] {
            for y in [1.5, 4.5, 7.5] {
                aps.push(AccessPoint {
                    id,
                    position: Vec3::new(x, y, 3.0),
                });
                id += 1;
            }
        }
        Self {
            width_m: 9.0,
            length_m: 9.0,
            height_m: 3.0,
            aps,
            luminous_flux_lm: 3200.0,
            semi_angle_deg: 30.0,
        }
    }

    /// Every violated scenario invariant, as human-readable strings.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [
            ("width_m", self.width_m),
            ("length_m", self.length_m),
            ("height_m", self.height_m),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.semi_angle_deg > 0.0 && self.semi_angle_deg < 90.0) {
            out.push(format!(
                "semi_angle_deg must lie in (0, 90), got {}",
                self.semi_angle_deg
            ));
        }
        if !(self.luminous_flux_lm >= 0.0 && self.luminous_flux_lm.is_finite()) {
            out.push(format!(
                "luminous_flux_lm must be non-negative, got {}",
                self.luminous_flux_lm
            ));
        }
        if self.aps.is_empty() {
            out.push("scenario has no access points".to_string());
        }
        let mut seen = BTreeMap::new();
        for ap in &self.aps {
            if seen.insert(ap.id, ()).is_some() {
                out.push(format!("duplicate access point id {}", ap.id));
            }
            let p = ap.position;
            let inside = (0.0..=self.width_m).contains(&p.x) && (0.0..=self.length_m).contains(&p.y);
            if !inside {
                out.push(format!(
                    "access point {} at ({}, {}) lies outside the {}×{} m footprint",
                    ap.id, p.x, p.y, self.width_m, self.length_m
                ));
            }
            if (p.z - self.height_m).abs() > 1e-9 {
                out.push(format!(
                    "access point {} at z={} is not on the ceiling (z={})",
                    ap.id, p.z, self.height_m
                ));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        match self.violations().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(GeometryError::InvalidScenario(v)),
        }
    }

    pub fn contains_footprint(&self, x: f64, y: f64) -> bool {
        (0.0..=self.width_m).contains(&x) && (0.0..=self.length_m).contains(&y)
    }
}

/// Lambertian index `m = −ln 2 / ln(cos φ½)`.
pub fn lambertian_index(semi_angle_deg: f64) -> Result<f64, GeometryError> {
    if !(semi_angle_deg > 0.0 && semi_angle_deg < 90.0) {
        return Err(GeometryError::SemiAngleOutOfRange(semi_angle_deg));
    }
    let c = semi_angle_deg.to_radians().cos();
    if c <= 0.0 || c >= 1.0 {
        return Err(GeometryError::SemiAngleOutOfRange(semi_angle_deg));
    }
    Ok(-std::f64::consts::LN_2 / c.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Incidence {
    pub distance_m: f64,
    /// Angle off the downward emission axis; 0 directly below the AP.
    pub angle_rad: f64,
}

/// Distance and incidence angle between an AP and a node.
///
/// The angle is measured from the AP's downward emission axis towards the
/// node, so a node straight below the AP sees `φ = 0`.
pub fn incidence_geometry(ap: &AccessPoint, node: &NodePosition) -> Result<Incidence, GeometryError> {
    let d = ap.position - node.position;
    let dist = d.norm();
    if dist == 0.0 {
        return Err(GeometryError::CoincidentPositions {
            ap_id: ap.id,
            node_id: node.node_id,
        });
    }
    // EMISSION_AXIS · (node − ap) = −EMISSION_AXIS · d
    let cos_phi = (-EMISSION_AXIS.dot(d) / dist).clamp(-1.0, 1.0);
    Ok(Incidence {
        distance_m: dist,
        angle_rad: cos_phi.acos(),
    })
}

fn lambertian_term(flux: f64, m: f64, dist: f64, cos_phi: f64) -> f64 {
    // Nodes at or above the emitter plane receive nothing.
    if cos_phi <= 0.0 {
        return 0.0;
    }
    flux * (m + 1.0) / (2.0 * PI * dist * dist) * cos_phi.powf(m)
}

/// Illuminance (lux) at `node` from a single AP.
pub fn ap_illuminance(
    scenario: &RoomScenario,
    ap: &AccessPoint,
    node: &NodePosition,
) -> Result<f64, GeometryError> {
    let m = lambertian_index(scenario.semi_angle_deg)?;
    let inc = incidence_geometry(ap, node)?;
    // cos from the vertical drop directly; avoids the acos/cos round trip.
    let cos_phi = (ap.position.z - node.position.z) / inc.distance_m;
    Ok(lambertian_term(scenario.luminous_flux_lm, m, inc.distance_m, cos_phi))
}

/// Sum of [`ap_illuminance`] over every AP in the scenario.
pub fn total_illuminance(scenario: &RoomScenario, node: &NodePosition) -> Result<f64, GeometryError> {
    if scenario.aps.is_empty() {
        return Err(GeometryError::NoAccessPoints);
    }
    let mut sum = 0.0;
    for ap in &scenario.aps {
        sum += ap_illuminance(scenario, ap, node)?;
    }
    Ok(sum)
}

/// Illuminance sampled at cell centres over the room footprint.
#[derive(Debug, Clone, PartialEq)]
pub struct IlluminanceGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub plane_z: f64,
    /// Row-major: `lux[iy][ix]`.
    pub lux: Vec<Vec<f64>>,
}

impl IlluminanceGrid {
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.ys.iter().enumerate().flat_map(move |(iy, &y)| {
            self.xs.iter().enumerate().map(move |(ix, &x)| (x, y, self.lux[iy][ix]))
        })
    }

    pub fn min(&self) -> f64 {
        self.cells().map(|c| c.2).fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.cells().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        let n = self.xs.len() * self.ys.len();
        self.cells().map(|c| c.2).sum::<f64>() / n as f64
    }

    /// Cell width along x and y.
    pub fn cell_size(&self, scenario: &RoomScenario) -> (f64, f64) {
        (
            scenario.width_m / self.xs.len() as f64,
            scenario.length_m / self.ys.len() as f64,
        )
    }

    /// Centre of the brightest cell (first in row-major order on ties).
    pub fn argmax(&self) -> (f64, f64, f64) {
        self.cells()
            .fold((0.0, 0.0, f64::NEG_INFINITY), |best, c| if c.2 > best.2 { c } else { best })
    }
}

fn cell_centres(extent: f64, resolution: f64) -> Vec<f64> {
    let n = ((extent / resolution) - 1e-9).ceil().max(1.0) as usize;
    let step = extent / n as f64;
    (0..n).map(|i| (i as f64 + 0.5) * step).collect()
}

/// Sample [`total_illuminance`] on a regular grid of cells roughly
/// `resolution` metres wide. The cell count per axis is rounded up so cells
/// tile the footprint exactly; a resolution larger than the room yields one
/// cell centred in the room.
pub fn illuminance_grid(
    scenario: &RoomScenario,
    plane_z: f64,
    resolution: f64,
) -> Result<IlluminanceGrid, GeometryError> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(GeometryError::BadResolution(resolution));
    }
    if !(plane_z >= 0.0 && plane_z < scenario.height_m) {
        return Err(GeometryError::BadPlane {
            plane_z,
            height: scenario.height_m,
        });
    }
    let xs = cell_centres(scenario.width_m, resolution);
    let ys = cell_centres(scenario.length_m, resolution);
    let mut lux = Vec::with_capacity(ys.len());
    for &y in &ys {
        let mut row = Vec::with_capacity(xs.len());
        for &x in &xs {
            let probe = NodePosition {
                node_id: 0,
                position: Vec3::new(x, y, plane_z),
            };
            row.push(total_illuminance(scenario, &probe)?);
        }
        lux.push(row);
    }
    Ok(IlluminanceGrid { xs, ys, plane_z, lux })
}

/// Partition of nodes by serving AP.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ClusterSet {
    /// AP id → node ids, in input order. Every AP has an entry, possibly empty.
    pub clusters: BTreeMap<u32, Vec<u32>>,
    /// node id → serving AP id.
    pub serving: BTreeMap<u32, u32>,
}

impl ClusterSet {
    pub fn members(&self, ap_id: u32) -> &[u32] {
        self.clusters.get(&ap_id).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Assign every node to the AP nearest in the horizontal plane. Ties go to
/// the lowest AP id.
pub fn assign_clusters(
    scenario: &RoomScenario,
    nodes: &[NodePosition],
) -> Result<ClusterSet, GeometryError> {
    if scenario.aps.is_empty() {
        return Err(GeometryError::NoAccessPoints);
    }
    let mut set = ClusterSet::default();
    for ap in &scenario.aps {
        set.clusters.entry(ap.id).or_default();
    }
    for node in nodes {
        let p = node.position;
        if !scenario.contains_footprint(p.x, p.y) {
            return Err(GeometryError::NodeOutsideRoom {
                node_id: node.node_id,
                x: p.x,
                y: p.y,
            });
        }
        if set.serving.contains_key(&node.node_id) {
            return Err(GeometryError::DuplicateNode(node.node_id));
        }
        let mut best: Option<(f64, u32)> = None;
        for ap in &scenario.aps {
            let d2 = ap.position.horizontal_dist_sq(p);
            best = match best {
                Some((bd, bid)) if bd < d2 || (bd == d2 && bid < ap.id) => Some((bd, bid)),
                _ => Some((d2, ap.id)),
            };
        }
        let (_, ap_id) = best.expect("non-empty AP list");
        set.serving.insert(node.node_id, ap_id);
        set.clusters.entry(ap_id).or_default().push(node.node_id);
    }
    Ok(set)
}
