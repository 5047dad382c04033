//! Small base tours derived by constrained search and cached with provenance.
//!
//! The library is read-only once built. [`BlockLibrary::global`] loads the
//! cache directory named by `KTOUR_BLOCKS_DIR` (default `ktour-blocks` in
//! the working directory) when it holds a valid manifest, and derives every
//! block in memory otherwise. Only [`BlockLibrary::save`] writes.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::board::{BoardSpec, MoveParams};
use crate::error::{Error, Result};
use crate::io::{import_document, Metadata, Provenance, TourDocument, SCHEMA_VERSION};
use crate::oracle::{solve, Outcome, SearchBudget, SearchConstraints};
use crate::sites::{find_inventory, is_bisited};
use crate::tour::Tour;

use super::seeded::{extender_constraints, is_extender, is_seeded, seeded_closed_constraints, seeded_open_constraints};

pub const BLOCKS_DIR_ENV: &str = "KTOUR_BLOCKS_DIR";
pub const DEFAULT_BLOCKS_DIR: &str = "ktour-blocks";
const MANIFEST: &str = "manifest.json";
const BASE_SEED: u64 = 0x6b74_6f75;
const MAX_ATTEMPTS: u32 = 32;

/// Predicate a stored block satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockTag {
    /// Closed, both seed edges, bi-sited.
    SeededClosed,
    /// Open from `(n,m)` to `(n,m-2)` with both seed edges.
    SeededOpen,
    /// Open `4 x m` path from `(4,m)` to `(4,m-1)` with both extender seeds.
    Extender,
    /// Closed and bi-sited.
    Bisited,
    /// Closed with two alpha-sites and two beta-sites, pairwise disjoint.
    SiteInventory,
}

impl fmt::Display for BlockTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        write!(f, "{}", s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

impl BlockTag {
    pub fn holds(self, t: &Tour) -> bool {
        if t.verify().is_err() {
            return false;
        }
        match self {
            BlockTag::SeededClosed => t.is_closed() && is_seeded(t) && is_bisited(t).unwrap_or(false),
            BlockTag::SeededOpen => {
                let d = t.board().dims();
                !t.is_closed() && is_seeded(t) && seeded_open_constraints(d[0], d[1]).accepts(t)
            }
            BlockTag::Extender => is_extender(t),
            BlockTag::Bisited => t.is_closed() && is_bisited(t).unwrap_or(false),
            BlockTag::SiteInventory => t.is_closed() && matches!(find_inventory(t), Ok(Some(_))),
        }
    }
}

/// What to derive for one block.
#[derive(Clone, Debug)]
pub struct BlockSpec {
    pub name: String,
    pub dims: Vec<usize>,
    pub moves: MoveParams,
    pub tag: BlockTag,
}

impl BlockSpec {
    fn new(dims: &[usize], tag: BlockTag) -> Self {
        BlockSpec {
            name: block_name(dims, MoveParams::CLASSICAL, tag),
            dims: dims.to_vec(),
            moves: MoveParams::CLASSICAL,
            tag,
        }
    }

    pub fn constraints(&self) -> SearchConstraints {
        let d = &self.dims;
        match self.tag {
            BlockTag::SeededClosed => seeded_closed_constraints(d[0], d[1]),
            BlockTag::SeededOpen => seeded_open_constraints(d[0], d[1]),
            BlockTag::Extender => extender_constraints(d[1]),
            BlockTag::Bisited | BlockTag::SiteInventory => SearchConstraints::closed(),
        }
    }
}

/// `tag-AxBxC`, with `-aXbY` appended for non-classical moves.
pub fn block_name(dims: &[usize], mp: MoveParams, tag: BlockTag) -> String {
    let d: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
    let mut name = format!("{tag}-{}", d.join("x"));
    if !mp.is_classical() {
        name.push_str(&format!("-a{}b{}", mp.alpha(), mp.beta()));
    }
    name
}

/// Every block the constructions draw on.
pub fn catalog() -> Vec<BlockSpec> {
    let mut out = Vec::new();
    for (n, m) in [(3, 10), (3, 12), (5, 6), (5, 8), (6, 6), (6, 7), (6, 8), (7, 8), (8, 8)] {
        out.push(BlockSpec::new(&[n, m], BlockTag::SeededClosed));
        out.push(BlockSpec::new(&[m, n], BlockTag::SeededClosed));
    }
    for (n, m) in [(5, 5), (5, 7), (7, 5), (7, 7)] {
        out.push(BlockSpec::new(&[n, m], BlockTag::SeededOpen));
    }
    for m in [3, 5, 7] {
        out.push(BlockSpec::new(&[4, m], BlockTag::Extender));
    }
    let solids: [&[usize]; 10] = [
        &[4, 4, 2],
        &[4, 4, 3],
        &[4, 3, 2],
        &[4, 3, 3],
        &[4, 5, 2],
        &[3, 2, 4],
        &[3, 2, 5],
        &[3, 2, 6],
        &[3, 2, 7],
        &[3, 3, 6],
    ];
    for d in solids {
        out.push(BlockSpec::new(d, BlockTag::Bisited));
    }
    let ab = MoveParams::new(3, 2).expect("valid moves");
    out.push(BlockSpec {
        name: block_name(&[10, 10], ab, BlockTag::SiteInventory),
        dims: vec![10, 10],
        moves: ab,
        tag: BlockTag::SiteInventory,
    });
    dedup_by_name(out)
}

fn dedup_by_name(specs: Vec<BlockSpec>) -> Vec<BlockSpec> {
    let mut seen = std::collections::HashSet::new();
    specs.into_iter().filter(|s| seen.insert(s.name.clone())).collect()
}

/// A stored block.
#[derive(Clone, Debug)]
pub struct Block {
    pub name: String,
    pub tag: BlockTag,
    pub tour: Tour,
    pub provenance: Provenance,
}

/// Derives one block: constrained search, then the tag predicate, retrying with fresh seeds.
pub fn derive_block(spec: &BlockSpec) -> Result<Block> {
    let board = BoardSpec::new(spec.dims.clone())?;
    let c = spec.constraints();
    for attempt in 0..MAX_ATTEMPTS {
        let seed = BASE_SEED.wrapping_add(attempt as u64);
        let budget = SearchBudget::default()
            .with_seed(seed)
            .with_time_limit(Duration::from_secs(60));
        match solve(&board, spec.moves, &c, &budget)? {
            Outcome::Found(t) if spec.tag.holds(&t) => {
                return Ok(Block {
                    name: spec.name.clone(),
                    tag: spec.tag,
                    tour: t,
                    provenance: Provenance {
                        method: "constrained-search".into(),
                        constraint: spec.tag.to_string(),
                        seed,
                        solver_version: env!("CARGO_PKG_VERSION").into(),
                        attempts: attempt + 1,
                    },
                })
            }
            Outcome::Found(_) => {}
            Outcome::ProvedNone(_) => {
                return Err(Error::Block(format!("{}: no tour satisfies the constraints", spec.name)))
            }
            Outcome::Exhausted(_) => {}
        }
    }
    Err(Error::Block(format!("{}: no acceptable tour in {MAX_ATTEMPTS} attempts", spec.name)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ManifestEntry {
    name: String,
    file: String,
    dims: Vec<usize>,
    alpha: usize,
    beta: usize,
    constraint: BlockTag,
    seed: u64,
    attempts: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    solver_version: String,
    blocks: Vec<ManifestEntry>,
}

/// Where a library came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LibrarySource {
    Derived,
    Loaded(PathBuf),
}

#[derive(Clone, Debug)]
pub struct BlockLibrary {
    blocks: BTreeMap<String, Block>,
    source: LibrarySource,
}

impl BlockLibrary {
    /// Derives every catalogued block, or only the named ones.
    pub fn derive(only: Option<&[String]>) -> Result<Self> {
        let specs = catalog();
        if let Some(names) = only {
            if let Some(bad) = names.iter().find(|n| !specs.iter().any(|s| &s.name == *n)) {
                return Err(Error::Block(format!("unknown block {bad}")));
            }
        }
        let mut blocks = BTreeMap::new();
        for spec in specs {
            if only.is_some_and(|names| !names.contains(&spec.name)) {
                continue;
            }
            blocks.insert(spec.name.clone(), derive_block(&spec)?);
        }
        Ok(BlockLibrary {
            blocks,
            source: LibrarySource::Derived,
        })
    }

    /// Loads a cache directory; every tour is verified and re-checked against its tag.
    pub fn load(dir: &Path) -> Result<Self> {
        let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST))?)?;
        if manifest.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!("manifest schema version {}", manifest.schema_version)));
        }
        let mut blocks = BTreeMap::new();
        for e in manifest.blocks {
            let (tour, meta) = import_document(&fs::read_to_string(dir.join(&e.file))?)?;
            if tour.board().dims() != e.dims.as_slice() || !e.constraint.holds(&tour) {
                return Err(Error::Block(format!("{} fails its {} check", e.name, e.constraint)));
            }
            let provenance = meta.provenance.unwrap_or_default();
            blocks.insert(
                e.name.clone(),
                Block {
                    name: e.name,
                    tag: e.constraint,
                    tour,
                    provenance,
                },
            );
        }
        Ok(BlockLibrary {
            blocks,
            source: LibrarySource::Loaded(dir.to_path_buf()),
        })
    }

    /// Writes one JSON file per block plus the manifest.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut entries = Vec::new();
        for b in self.blocks.values() {
            let file = format!("{}.json", b.name);
            let meta = Metadata {
                generator: format!("ktour {}", env!("CARGO_PKG_VERSION")),
                trace: vec![format!("derived block {}", b.name)],
                provenance: Some(b.provenance.clone()),
            };
            let doc = TourDocument::from_tour(&b.tour, meta);
            fs::write(dir.join(&file), serde_json::to_string_pretty(&doc)?)?;
            entries.push(ManifestEntry {
                name: b.name.clone(),
                file,
                dims: b.tour.board().dims().to_vec(),
                alpha: b.tour.moves().alpha(),
                beta: b.tour.moves().beta(),
                constraint: b.tag,
                seed: b.provenance.seed,
                attempts: b.provenance.attempts,
            });
        }
        let manifest = Manifest {
            schema_version: SCHEMA_VERSION,
            solver_version: env!("CARGO_PKG_VERSION").into(),
            blocks: entries,
        };
        fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&manifest)?)?;
        Ok(())
    }

    /// Merges freshly derived blocks over this library.
    pub fn merged(mut self, other: BlockLibrary) -> Self {
        self.blocks.extend(other.blocks);
        self
    }

    /// Cache directory from the environment, or the working-directory default.
    pub fn cache_dir() -> PathBuf {
        std::env::var_os(BLOCKS_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_BLOCKS_DIR))
    }

    /// Process-wide library: the cache when it loads cleanly and is complete, else derived.
    pub fn global() -> &'static BlockLibrary {
        static LIB: OnceLock<BlockLibrary> = OnceLock::new();
        LIB.get_or_init(|| {
            let dir = Self::cache_dir();
            if dir.join(MANIFEST).is_file() {
                if let Ok(lib) = Self::load(&dir) {
                    if catalog().iter().all(|s| lib.blocks.contains_key(&s.name)) {
                        return lib;
                    }
                }
            }
            Self::derive(None).expect("every catalogued block is derivable")
        })
    }

    pub fn source(&self) -> &LibrarySource {
        &self.source
    }

    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.values()
    }

    pub fn get(&self, name: &str) -> Result<&Block> {
        self.blocks
            .get(name)
            .ok_or_else(|| Error::Block(format!("{name} is not in the library")))
    }

    pub fn tour(&self, dims: &[usize], tag: BlockTag) -> Result<&Tour> {
        Ok(&self.get(&block_name(dims, MoveParams::CLASSICAL, tag))?.tour)
    }
}
