//! JSON corpus files and the built-in corpus.
//!
//! A descriptor on disk looks like
//! `{"label": "koebe", "h": {"kind": "catalog", "name": "koebe"},
//!   "g": {"kind": "series", "coeffs": [[0, 0]]}, "flags": ["SH", "SH0"]}`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hmap::{AnalyticPart, CatalogFn, MapDescriptor, MapFlags};
use crate::transforms;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub label: String,
    pub h: PartSpec,
    pub g: PartSpec,
    #[serde(default)]
    pub flags: Vec<String>,
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

impl PartSpec {
    pub fn to_part(&self) -> Result<AnalyticPart> {
        match self.kind.as_str() {
            "catalog" => {
                let name = self
                    .name
                    .as_deref()
                    .ok_or_else(|| Error::Descriptor("catalog part without `name`".into()))?;
                if name == "polynomial" {
                    let coeffs = self.coeffs.as_deref().ok_or_else(|| {
                        Error::Descriptor("polynomial catalog entry without `coeffs`".into())
                    })?;
                    return AnalyticPart::series(to_complex(coeffs));
                }
                let f = CatalogFn::from_name(name)
                    .ok_or_else(|| Error::Descriptor(format!("unknown catalog name `{name}`")))?;
                match self.rotation {
                    Some([re, im]) => AnalyticPart::rotated(f, Complex64::new(re, im)),
                    None => Ok(AnalyticPart::catalog(f)),
                }
            }
            "series" => {
                let coeffs = self
                    .coeffs
                    .as_deref()
                    .ok_or_else(|| Error::Descriptor("series part without `coeffs`".into()))?;
                AnalyticPart::series(to_complex(coeffs))
            }
            other => Err(Error::Descriptor(format!("unknown part kind `{other}`"))),
        }
    }

    /// Only catalog leaves and polynomials have a wire form.
    pub fn from_part(part: &AnalyticPart) -> Result<Self> {
        match part {
            AnalyticPart::Catalog { name, rotation } => Ok(PartSpec {
                kind: "catalog".into(),
                name: Some(name.name().into()),
                coeffs: None,
                rotation: (*rotation != Complex64::new(1.0, 0.0)).then_some([rotation.re, rotation.im]),
            }),
            AnalyticPart::Series { coeffs } => Ok(PartSpec {
                kind: "series".into(),
                name: None,
                coeffs: Some(coeffs.iter().map(|c| [c.re, c.im]).collect()),
                rotation: None,
            }),
            _ => Err(Error::Descriptor(
                "composed parts have no serialized form".into(),
            )),
        }
    }
}

impl MapSpec {
    pub fn to_map(&self) -> Result<MapDescriptor> {
        MapDescriptor::new(
            self.label.clone(),
            self.h.to_part()?,
            self.g.to_part()?,
            MapFlags::from_names(&self.flags)?,
        )
    }

    pub fn from_map(map: &MapDescriptor) -> Result<Self> {
        Ok(MapSpec {
            label: map.label.clone(),
            h: PartSpec::from_part(&map.h)?,
            g: PartSpec::from_part(&map.g)?,
            flags: map.flags.to_names(),
        })
    }
}

/// An ordered set of labelled maps.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    maps: Vec<MapDescriptor>,
}

impl Corpus {
    pub fn new(maps: Vec<MapDescriptor>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for m in &maps {
            if !seen.insert(m.label.clone()) {
                return Err(Error::Descriptor(format!("duplicate label `{}`", m.label)));
            }
        }
        Ok(Corpus { maps })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let specs: Vec<MapSpec> =
            serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))?;
        Self::new(specs.iter().map(MapSpec::to_map).collect::<Result<_>>()?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Descriptor(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        let specs = self.maps.iter().map(MapSpec::from_map).collect::<Result<Vec<_>>>()?;
        serde_json::to_string_pretty(&specs).map_err(|e| Error::Descriptor(e.to_string()))
    }

    pub fn get(&self, label: &str) -> Result<&MapDescriptor> {
        self.maps
            .iter()
            .find(|m| m.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn maps(&self) -> &[MapDescriptor] {
        &self.maps
    }

    pub fn labels(&self) -> Vec<&str> {
        self.maps.iter().map(|m| m.label.as_str()).collect()
    }
}

/// The six reference maps: identity, the K = 3 shear of the identity, two
/// convex polynomials, the Koebe function and the half-plane map.
pub fn builtin() -> Corpus {
    let sh0 = MapFlags {
        sh: true,
        sh0: true,
        ..Default::default()
    };
    let bounded_convex = MapFlags {
        convex: true,
        starlike: true,
        bounded: true,
        ..sh0
    };
    let identity =
        MapDescriptor::analytic("identity", AnalyticPart::identity(), bounded_convex).expect("identity");
    let shear = transforms::shear_qc(&AnalyticPart::identity(), 3.0)
        .expect("shear")
        .relabeled("shear-k3");
    let shear = MapDescriptor {
        flags: MapFlags {
            sh: true,
            sh0: false,
            bounded: true,
            ..Default::default()
        },
        ..shear
    };
    let poly2 = MapDescriptor::analytic(
        "poly2",
        AnalyticPart::polynomial(&[0.0, 1.0, 0.125]).expect("poly2"),
        bounded_convex,
    )
    .expect("poly2");
    let poly3 = MapDescriptor::analytic(
        "poly3",
        AnalyticPart::polynomial(&[0.0, 1.0, 0.0, 1.0 / 9.0]).expect("poly3"),
        bounded_convex,
    )
    .expect("poly3");
    let koebe = MapDescriptor::analytic(
        "koebe",
        AnalyticPart::catalog(CatalogFn::Koebe),
        MapFlags {
            starlike: true,
            ..sh0
        },
    )
    .expect("koebe");
    let halfplane = MapDescriptor::analytic(
        "halfplane",
        AnalyticPart::catalog(CatalogFn::Halfplane),
        MapFlags {
            convex: true,
            starlike: true,
            ..sh0
        },
    )
    .expect("halfplane");
    Corpus::new(vec![identity, shear, poly2, poly3, koebe, halfplane]).expect("unique labels")
}
