//! Built-in excitation models. The fixed ones are TOML data under `models/`;
//! the self-dual family is generated for any even dimension.

use super::{AnyonError, DomainWall, ExcitationModel, Generator};
use crate::format;

/// A model together with the walls declared for it.
#[derive(Clone, Debug)]
pub struct ModelBundle {
    pub model: ExcitationModel,
    pub walls: Vec<DomainWall>,
}

impl ModelBundle {
    pub fn wall(&self, name: &str) -> Result<&DomainWall, AnyonError> {
        self.walls
            .iter()
            .find(|w| w.name() == name)
            .ok_or_else(|| AnyonError::UnknownBuiltin(format!("wall {name:?} of model {}", self.model.name())))
    }
}

const FIXED: &[(&str, &str)] = &[
    ("surface_2d", include_str!("../../models/surface_2d.toml")),
    ("surface_2d_x2", include_str!("../../models/surface_2d_x2.toml")),
    ("surface_2d_x3", include_str!("../../models/surface_2d_x3.toml")),
    ("surface_3d", include_str!("../../models/surface_3d.toml")),
    ("levin_wen_3d", include_str!("../../models/levin_wen_3d.toml")),
    ("selfdual_4d", include_str!("../../models/selfdual_4d.toml")),
    ("surface_3d_x3", include_str!("../../models/surface_3d_x3.toml")),
];

pub fn names() -> Vec<String> {
    let mut v: Vec<String> = FIXED.iter().map(|(n, _)| n.to_string()).collect();
    v.push("selfdual_<2k>d".into());
    v
}

pub fn model(name: &str) -> Result<ModelBundle, AnyonError> {
    if let Some((_, text)) = FIXED.iter().find(|(n, _)| *n == name) {
        return format::parse_model(text).map_err(|e| AnyonError::InvalidModel(e.to_string()));
    }
    if let Some(d) = name.strip_prefix("selfdual_").and_then(|r| r.strip_suffix('d')).and_then(|r| r.parse().ok()) {
        return selfdual(d);
    }
    Err(AnyonError::UnknownBuiltin(name.to_string()))
}

/// Self-dual surface code in even dimension `d = 2k`: `e` and `m` are both
/// `(k-1)`-dimensional and the Hadamard wall exchanges them.
pub fn selfdual(d: usize) -> Result<ModelBundle, AnyonError> {
    if d < 2 || !d.is_multiple_of(2) {
        return Err(AnyonError::UnknownBuiltin(format!("selfdual_{d}d (dimension must be even and at least 2)")));
    }
    let j = d / 2 - 1;
    let model = ExcitationModel::new(
        format!("selfdual_{d}d"),
        d,
        vec![Generator { name: "e".into(), dim: j, theta: 1 }, Generator { name: "m".into(), dim: j, theta: 1 }],
        vec![vec![1, -1], vec![-1, 1]],
        vec![],
    )?;
    let h = DomainWall::new(&model, "hadamard", vec![model.generator(1), model.generator(0)], d - 1)?;
    let id = DomainWall::identity(&model, "identity", d - 1)?;
    Ok(ModelBundle { model, walls: vec![id, h] })
}
