//! Strategy routing: map each asset request to exactly one construction
//! strategy, with articulation taking priority over every other family so
//! movable components are preserved before geometry export.
//!
//! Priority order:
//!
//! 1. articulation (category movable roles, or articulation keywords in the
//!    description or category text);
//! 2. print-like wall-mounted objects;
//! 3. thin coverings;
//! 4. furniture-scale rigid objects;
//! 5. remaining manipulands, split simple/structured by expected part count
//!    and the presence of handle/shell/housing roles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AssetRequest, SupportKind};

/// Articulation keywords: a request whose description mentions one of these
/// routes to the articulated branch regardless of category family.
pub const ARTICULATION_KEYWORDS: &[&str] = &[
    "door", "drawer", "lid", "hinge", "slide", "sliding", "slider", "rotating", "cap", "lever",
];

/// Roles whose presence marks a structured (multi-component) manipuland.
const STRUCTURED_ROLE_MARKERS: &[&str] = &["handle", "shell", "housing"];

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RouterError {
    #[error("category '{0}' not in ontology and no keyword rule matches")]
    UnknownCategory(String),
}

/// Construction strategy families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    WallArt,
    StaticFurn,
    SimpleManip,
    StructManip,
    Artic,
    ThinCover,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Strategy::WallArt => "wall_art",
            Strategy::StaticFurn => "static_furn",
            Strategy::SimpleManip => "simple_manip",
            Strategy::StructManip => "struct_manip",
            Strategy::Artic => "artic",
            Strategy::ThinCover => "thin_cover",
        };
        f.write_str(s)
    }
}

/// Functional side of an object, in the object-local frame (front = -y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Front,
    Back,
    Left,
    Right,
}

/// Per-category routing and verification knowledge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryEntry {
    pub family: Strategy,
    /// Part roles the verifier requires; matched by exact name or by the
    /// `role_`/`role/` prefix so `door` covers `door_l` and `door_r`.
    #[serde(default)]
    pub required_parts: Vec<String>,
    #[serde(default)]
    pub movable_roles: Vec<String>,
    #[serde(default)]
    pub functional_sides: Vec<Side>,
    #[serde(default)]
    pub furniture_scale: bool,
    #[serde(default)]
    pub print_like: bool,
    #[serde(default)]
    pub thin_cover: bool,
    #[serde(default)]
    pub articulation_keywords: Vec<String>,
}

/// Category knowledge base: routing families, required part roles, movable
/// roles, and functional sides. A user-supplied ontology file is merged
/// over the shipped defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryOntology {
    pub entries: BTreeMap<String, CategoryEntry>,
}

/// Normalize a category string: lowercase, separators to single spaces.
pub fn normalize_category(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut last_space = true;
    for ch in raw.chars() {
        let c = if ch == '-' || ch == '_' { ' ' } else { ch };
        if c.is_whitespace() {
            if !last_space {
                out.push(' ');
                last_space = true;
            }
        } else {
            out.extend(c.to_lowercase());
            last_space = false;
        }
    }
    out.trim_end().to_string()
}

fn singularize(word: &str) -> &str {
    if word.len() > 3 && word.ends_with('s') && !word.ends_with("ss") {
        &word[..word.len() - 1]
    } else {
        word
    }
}

impl CategoryOntology {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Overlay `other`'s entries on top of this ontology.
    pub fn merge(&mut self, other: CategoryOntology) {
        for (k, v) in other.entries {
            self.entries.insert(normalize_category(&k), v);
        }
    }

    /// Resolve a category with fallbacks: exact normalized name, singular
    /// form, then the trailing word (singularized) so "wine cabinet" finds
    /// "cabinet".
    pub fn resolve(&self, category: &str) -> Option<(&str, &CategoryEntry)> {
        let norm = normalize_category(category);
        if let Some((k, v)) = self.entries.get_key_value(norm.as_str()) {
            return Some((k.as_str(), v));
        }
        let singular = norm
            .split(' ')
            .map(singularize)
            .collect::<Vec<_>>()
            .join(" ");
        if let Some((k, v)) = self.entries.get_key_value(singular.as_str()) {
            return Some((k.as_str(), v));
        }
        if let Some(last) = singular.split(' ').next_back() {
            if let Some((k, v)) = self.entries.get_key_value(last) {
                return Some((k.as_str(), v));
            }
        }
        None
    }

    pub fn validate(&self) -> Result<(), String> {
        for (cat, entry) in &self.entries {
            let mut seen = std::collections::BTreeSet::new();
            for r in &entry.required_parts {
                if !seen.insert(r) {
                    return Err(format!("category {cat}: duplicate required part role {r}"));
                }
            }
        }
        Ok(())
    }
}

/// True when the text mentions an articulation keyword as a word (plural
/// and participle forms included).
pub fn mentions_articulation(text: &str) -> bool {
    text_has_keyword(text, ARTICULATION_KEYWORDS)
}

fn text_has_keyword(text: &str, keywords: &[&str]) -> bool {
    let lower = text.to_lowercase();
    lower
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .any(|token| {
            let tok = singularize(token);
            keywords
                .iter()
                .any(|kw| tok == *kw || (kw.len() >= 4 && tok.starts_with(kw)))
        })
}

/// Route a request to exactly one strategy. Deterministic and total on the
/// shipped ontology; unknown categories with no keyword evidence are an
/// error that the caller may map to `StaticFurn` behind an explicit flag.
pub fn route(req: &AssetRequest, ont: &CategoryOntology) -> Result<Strategy, RouterError> {
    let resolved = ont.resolve(&req.category);

    // (1) Articulation first: movable components must be preserved before
    // any geometry export. Category knowledge wins over description
    // keywords when both are present.
    if let Some((_, entry)) = resolved {
        if !entry.movable_roles.is_empty() {
            return Ok(Strategy::Artic);
        }
        if !entry.articulation_keywords.is_empty()
            && text_has_keyword(
                &req.description,
                &entry
                    .articulation_keywords
                    .iter()
                    .map(String::as_str)
                    .collect::<Vec<_>>(),
            )
        {
            return Ok(Strategy::Artic);
        }
    }
    if mentions_articulation(&req.description) || mentions_articulation(&req.category) {
        return Ok(Strategy::Artic);
    }

    let Some((_, entry)) = resolved else {
        return Err(RouterError::UnknownCategory(req.category.clone()));
    };

    // (2) Print-like wall-mounted objects.
    if entry.print_like && req.support.kind == SupportKind::Wall {
        return Ok(Strategy::WallArt);
    }
    // (3) Thin coverings.
    if entry.thin_cover {
        return Ok(Strategy::ThinCover);
    }
    // (4) Furniture-scale rigid objects.
    if entry.furniture_scale {
        return Ok(Strategy::StaticFurn);
    }
    // (5) Remaining manipulands: simple when the ontology marks a single
    // dominant shape with at most two expected parts and no
    // handle/shell/housing role.
    let structurally_simple = entry.required_parts.len() <= 2
        && !entry.required_parts.iter().any(|r| {
            STRUCTURED_ROLE_MARKERS
                .iter()
                .any(|m| r.to_lowercase().contains(m))
        });
    if entry.family == Strategy::SimpleManip && structurally_simple {
        Ok(Strategy::SimpleManip)
    } else {
        Ok(Strategy::StructManip)
    }
}

/// The shipped ontology. Covers the indoor categories of the routing
/// taxonomy; extend or override it with a user ontology file.
pub fn default_ontology() -> CategoryOntology {
    let mut entries: BTreeMap<String, CategoryEntry> = BTreeMap::new();

    struct B {
        family: Strategy,
        required: &'static [&'static str],
        movable: &'static [&'static str],
        sides: &'static [Side],
        furniture: bool,
        print: bool,
        thin: bool,
    }
    impl B {
        fn entry(&self) -> CategoryEntry {
            CategoryEntry {
                family: self.family,
                required_parts: self.required.iter().map(|s| s.to_string()).collect(),
                movable_roles: self.movable.iter().map(|s| s.to_string()).collect(),
                functional_sides: self.sides.to_vec(),
                furniture_scale: self.furniture,
                print_like: self.print,
                thin_cover: self.thin,
                articulation_keywords: Vec::new(),
            }
        }
    }
    let mut add = |names: &[&str], b: B| {
        let e = b.entry();
        for n in names {
            entries.insert(normalize_category(n), e.clone());
        }
    };

    // Print-like wall-mounted objects.
    add(
        &[
            "poster",
            "painting",
            "artwork",
            "picture frame",
            "framed photo",
            "framed artwork",
            "canvas print",
            "mural",
            "print",
            "wall art",
            "photo",
        ],
        B {
            family: Strategy::WallArt,
            required: &["canvas"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: true,
            thin: false,
        },
    );

    // Thin coverings.
    add(
        &["rug", "carpet", "mat", "doormat", "area rug"],
        B {
            family: Strategy::ThinCover,
            required: &["body"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: false,
            thin: true,
        },
    );

    // Large rigid furniture.
    add(
        &[
            "table",
            "dining table",
            "coffee table",
            "side table",
            "bar table",
            "bistro table",
        ],
        B {
            family: Strategy::StaticFurn,
            required: &["top", "leg"],
            movable: &[],
            sides: &[],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["desk", "gaming desk"],
        B {
            family: Strategy::StaticFurn,
            required: &["top", "leg"],
            movable: &[],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["chair", "dining chair"],
        B {
            family: Strategy::StaticFurn,
            required: &["seat", "backrest", "leg"],
            movable: &[],
            sides: &[],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["stool", "bar stool", "bench"],
        B {
            family: Strategy::StaticFurn,
            required: &["seat", "leg"],
            movable: &[],
            sides: &[],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["sofa", "couch", "armchair", "loveseat", "bean bag chair"],
        B {
            family: Strategy::StaticFurn,
            required: &["base", "backrest"],
            movable: &[],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["bed", "twin bed", "double bed", "king-size bed", "queen bed"],
        B {
            family: Strategy::StaticFurn,
            required: &["frame", "mattress"],
            movable: &[],
            sides: &[Side::Left, Side::Right],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &[
            "shelf",
            "bookshelf",
            "bookcase",
            "display shelf",
            "pantry shelf",
            "shelving unit",
            "wall shelf",
        ],
        B {
            family: Strategy::StaticFurn,
            required: &["side", "board_1"],
            movable: &[],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["plant stand", "ladder", "tv stand", "sideboard", "vanity"],
        B {
            family: Strategy::StaticFurn,
            required: &["top", "leg"],
            movable: &[],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["floor lamp", "lamp"],
        B {
            family: Strategy::StaticFurn,
            required: &["base", "pole", "shade"],
            movable: &[],
            sides: &[],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["mirror", "tall mirror"],
        B {
            family: Strategy::StaticFurn,
            required: &["plate", "frame"],
            movable: &[],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["wall clock", "clock"],
        B {
            family: Strategy::StaticFurn,
            required: &["face"],
            movable: &[],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["sconce", "ceiling lamp", "pendant light", "light switch", "ceiling fan"],
        B {
            family: Strategy::StaticFurn,
            required: &["body"],
            movable: &[],
            sides: &[],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["treadmill", "exercise bike", "pool table", "popcorn machine", "bicycle"],
        B {
            family: Strategy::StaticFurn,
            required: &["body"],
            movable: &[],
            sides: &[],
            furniture: true,
            print: false,
            thin: false,
        },
    );

    // Simple manipulands: single dominant shape, shell-first curved bodies.
    add(
        &["bowl", "plate", "dish", "saucer", "coaster", "fruit bowl"],
        B {
            family: Strategy::SimpleManip,
            required: &["body"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: false,
            thin: false,
        },
    );
    add(
        &["fork", "spoon", "book", "tape", "scissors", "whole fruit", "fruit", "apple", "jug"],
        B {
            family: Strategy::SimpleManip,
            required: &["body"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: false,
            thin: false,
        },
    );
    add(
        &["vase"],
        B {
            family: Strategy::SimpleManip,
            required: &["body"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: false,
            thin: false,
        },
    );

    // Structured manipulands: visible subparts, rigid packaging.
    add(
        &["mug", "cup", "teacup"],
        B {
            family: Strategy::StructManip,
            required: &["body", "handle"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: false,
            thin: false,
        },
    );
    add(
        &["phone", "remote control", "toy", "usb stick", "chopsticks", "hardware"],
        B {
            family: Strategy::StructManip,
            required: &["body"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: false,
            thin: false,
        },
    );
    add(
        &["table lamp", "desk lamp"],
        B {
            family: Strategy::StructManip,
            required: &["base", "pole", "shade"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: false,
            thin: false,
        },
    );
    add(
        &["monitor", "tv", "flatscreen tv", "television"],
        B {
            family: Strategy::StructManip,
            required: &["screen", "stand"],
            movable: &[],
            sides: &[Side::Front],
            furniture: false,
            print: false,
            thin: false,
        },
    );
    add(
        &["flower pot", "potted plant", "plant", "herb planter"],
        B {
            family: Strategy::StructManip,
            required: &["pot", "leaf"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: false,
            thin: false,
        },
    );
    add(
        &["crate", "tire", "basket", "laundry hamper", "box"],
        B {
            family: Strategy::StructManip,
            required: &["body"],
            movable: &[],
            sides: &[],
            furniture: false,
            print: false,
            thin: false,
        },
    );

    // Articulated objects: functional movable parts compiled into joints.
    add(
        &["nightstand", "night stand", "bedside table"],
        B {
            family: Strategy::Artic,
            required: &["body", "drawer"],
            movable: &["drawer"],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["dresser", "filing cabinet", "drawer unit", "chest of drawers"],
        B {
            family: Strategy::Artic,
            required: &["body", "drawer"],
            movable: &["drawer"],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["cabinet", "wine cabinet", "kitchen cabinet", "cupboard", "hutch"],
        B {
            family: Strategy::Artic,
            required: &["body", "door"],
            movable: &["door"],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["wardrobe", "closet", "armoire"],
        B {
            family: Strategy::Artic,
            required: &["body", "door"],
            movable: &["door"],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["refrigerator", "fridge", "mini fridge", "freezer"],
        B {
            family: Strategy::Artic,
            required: &["body", "door"],
            movable: &["door"],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["oven", "microwave", "dishwasher", "washing machine", "dryer", "toaster"],
        B {
            family: Strategy::Artic,
            required: &["body", "door"],
            movable: &["door"],
            sides: &[Side::Front],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["office chair", "rolling chair"],
        B {
            family: Strategy::Artic,
            required: &["seat", "backrest", "base"],
            movable: &["seat"],
            sides: &[],
            furniture: true,
            print: false,
            thin: false,
        },
    );
    add(
        &["trash can", "kettle", "thermos", "hinged box", "mailbox", "laptop"],
        B {
            family: Strategy::Artic,
            required: &["body", "lid"],
            movable: &["lid"],
            sides: &[],
            furniture: false,
            print: false,
            thin: false,
        },
    );
    add(
        &["cuckoo clock", "pendulum clock"],
        B {
            family: Strategy::Artic,
            required: &["body", "pendulum"],
            movable: &["pendulum"],
            sides: &[Side::Front],
            furniture: false,
            print: false,
            thin: false,
        },
    );

    CategoryOntology { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RigidTransform, SupportRelation};

    fn req(category: &str, description: &str, support: SupportRelation) -> AssetRequest {
        AssetRequest {
            id: "t1".into(),
            category: category.into(),
            description: description.into(),
            target_dims: [1.0, 1.0, 1.0],
            style: String::new(),
            placement: RigidTransform::identity(),
            support,
        }
    }

    #[test]
    fn paper_route_examples() {
        let ont = default_ontology();
        let cases = [
            ("refrigerator", SupportRelation::ground(), Strategy::Artic),
            ("poster", SupportRelation::wall(), Strategy::WallArt),
            ("rug", SupportRelation::ground(), Strategy::ThinCover),
            ("bowl", SupportRelation::ground(), Strategy::SimpleManip),
            ("mug", SupportRelation::ground(), Strategy::StructManip),
        ];
        for (cat, sup, want) in cases {
            let got = route(&req(cat, "", sup), &ont).unwrap();
            assert_eq!(got, want, "category {cat}");
        }
    }

    #[test]
    fn keyword_dominance_over_family() {
        let ont = default_ontology();
        // A desk is static furniture, but drawers force the articulated branch.
        let r = req("desk", "a desk with two drawers", SupportRelation::ground());
        assert_eq!(route(&r, &ont).unwrap(), Strategy::Artic);
        for kw in ["door", "drawer", "lid", "hinge", "slider", "rotating"] {
            let r = req("table", &format!("has a {kw}"), SupportRelation::ground());
            assert_eq!(route(&r, &ont).unwrap(), Strategy::Artic, "keyword {kw}");
        }
    }

    #[test]
    fn totality_on_shipped_ontology() {
        let ont = default_ontology();
        ont.validate().unwrap();
        assert!(ont.entries.len() >= 40, "ontology has {} entries", ont.entries.len());
        for cat in ont.entries.keys() {
            let support = if ont.entries[cat].print_like {
                SupportRelation::wall()
            } else {
                SupportRelation::ground()
            };
            route(&req(cat, "", support), &ont)
                .unwrap_or_else(|e| panic!("category {cat} failed to route: {e}"));
        }
    }

    #[test]
    fn unknown_category_is_an_error_unless_keyworded() {
        let ont = default_ontology();
        let r = req("quantum flux capacitor", "", SupportRelation::ground());
        assert!(matches!(route(&r, &ont), Err(RouterError::UnknownCategory(_))));
        let r2 = req(
            "quantum flux capacitor",
            "with a hinged lid",
            SupportRelation::ground(),
        );
        assert_eq!(route(&r2, &ont).unwrap(), Strategy::Artic);
    }

    #[test]
    fn category_phrases_resolve_by_suffix() {
        let ont = default_ontology();
        assert!(ont.resolve("stainless steel refrigerators").is_some());
        assert!(ont.resolve("Wine Cabinet").is_some());
        assert_eq!(
            route(&req("two wine cabinets", "", SupportRelation::ground()), &ont).unwrap(),
            Strategy::Artic
        );
    }

    #[test]
    fn route_is_pure() {
        let ont = default_ontology();
        let r = req("cabinet", "a cabinet", SupportRelation::ground());
        let a = route(&r, &ont).unwrap();
        let b = route(&r, &ont).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ontology_merge_overrides() {
        let mut ont = default_ontology();
        let mut custom = CategoryOntology::empty();
        custom.entries.insert(
            "rug".into(),
            CategoryEntry {
                family: Strategy::StaticFurn,
                required_parts: vec!["body".into()],
                movable_roles: vec![],
                functional_sides: vec![],
                furniture_scale: true,
                print_like: false,
                thin_cover: false,
                articulation_keywords: vec![],
            },
        );
        ont.merge(custom);
        let got = route(&req("rug", "", SupportRelation::ground()), &ont).unwrap();
        assert_eq!(got, Strategy::StaticFurn);
    }
}
