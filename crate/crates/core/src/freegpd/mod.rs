//! Free groupoids presented by finite directed graphs.
//!
//! Words are stored in application order: the first letter is applied
//! first, so a word `w = l1.l2.…` runs from `src(l1)` to the target of its
//! last letter. Formulas written right-to-left are converted at the call
//! site.

mod collapse;
mod conjugacy;
mod twisted;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

pub use collapse::EdgeCollapse;
pub use conjugacy::{loop_canonical, loop_normal_form, LoopNormalForm};
pub use twisted::{twisted_equiv, Distinction, TwistedClassifier, TwistedVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGpdError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("object index {0} out of range")]
    ObjectOutOfRange(usize),
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
    #[error("letter {position} starts at object {found} but the word is at object {expected}")]
    NotComposable {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot compose: first word ends at {first_tgt}, second starts at {second_src}")]
    EndpointMismatch { first_tgt: usize, second_src: usize },
    #[error("word from {src} to {tgt} is not a loop")]
    NotALoop { src: usize, tgt: usize },
    #[error("word from {src} to {tgt} is not a twisted loop (expected target {expected})")]
    NotTwistedLoop { src: usize, tgt: usize, expected: usize },
    #[error("invalid endofunctor: {0}")]
    InvalidEndo(String),
    #[error("edge {0} cannot be collapsed: {1}")]
    NotCollapsible(usize, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// +1 or -1.
    pub fn exp(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Oriented source, i.e. the target of the generator when inverted.
    pub fn src(self, g: &Graph) -> usize {
        let gen = &g.generators[self.gen];
        if self.inverse {
            gen.tgt
        } else {
            gen.src
        }
    }

    pub fn tgt(self, g: &Graph) -> usize {
        let gen = &g.generators[self.gen];
        if self.inverse {
            gen.src
        } else {
            gen.tgt
        }
    }

    /// Total order used for canonical rotations: generators in declaration
    /// order, positive before negative.
    pub fn order_key(self) -> usize {
        2 * self.gen + usize::from(self.inverse)
    }
}

/// A morphism of the free groupoid, as a sequence of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    src: usize,
    tgt: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(x: usize) -> Self {
        Word {
            src: x,
            tgt: x,
            letters: Vec::new(),
        }
    }

    /// Checks composability and builds the word. The word is not reduced.
    pub fn new(g: &Graph, src: usize, letters: Vec<Letter>) -> Result<Self, FreeGpdError> {
        if src >= g.num_objects() {
            return Err(FreeGpdError::ObjectOutOfRange(src));
        }
        let mut at = src;
        for (position, l) in letters.iter().enumerate() {
            if l.gen >= g.num_generators() {
                return Err(FreeGpdError::GeneratorOutOfRange(l.gen));
            }
            let s = l.src(g);
            if s != at {
                return Err(FreeGpdError::NotComposable {
                    position,
                    expected: at,
                    found: s,
                });
            }
            at = l.tgt(g);
        }
        Ok(Word { src, tgt: at, letters })
    }

    pub fn letter(g: &Graph, l: Letter) -> Self {
        Word {
            src: l.src(g),
            tgt: l.tgt(g),
            letters: vec![l],
        }
    }

    /// Builds a word from trusted parts. Callers guarantee composability.
    pub(crate) fn from_parts(src: usize, tgt: usize, letters: Vec<Letter>) -> Self {
        Word { src, tgt, letters }
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn tgt(&self) -> usize {
        self.tgt
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.tgt
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[1] != w[0].inv())
    }

    /// Signed number of occurrences of generator `gen`.
    pub fn signed_count(&self, gen: usize) -> i64 {
        self.letters.iter().filter(|l| l.gen == gen).map(|l| l.exp()).sum()
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> WordDisplay<'a> {
        WordDisplay { word: self, graph: g }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    graph: &'a Graph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.graph.objects[self.word.src])?;
        if self.word.letters.is_empty() {
            return write!(f, "id");
        }
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", self.graph.generators[l.gen].name)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Freely reduces a sequence of letters.
pub(crate) fn reduce_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn reduce(w: &Word) -> Word {
    Word {
        src: w.src,
        tgt: w.tgt,
        letters: reduce_letters(w.letters.iter().copied()),
    }
}

/// `w1` followed by `w2`, reduced.
pub fn compose(w1: &Word, w2: &Word) -> Result<Word, FreeGpdError> {
    if w1.tgt != w2.src {
        return Err(FreeGpdError::EndpointMismatch {
            first_tgt: w1.tgt,
            second_src: w2.src,
        });
    }
    Ok(Word {
        src: w1.src,
        tgt: w2.tgt,
        letters: reduce_letters(w1.letters.iter().chain(&w2.letters).copied()),
    })
}

pub fn invert(w: &Word) -> Word {
    Word {
        src: w.tgt,
        tgt: w.src,
        letters: w.letters.iter().rev().map(|l| l.inv()).collect(),
    }
}

/// Undirected connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi0Partition {
    /// Component id of each object; ids are numbered by first occurrence.
    pub component: Vec<usize>,
    /// Smallest object of each component, which is also its spanning-forest root.
    pub representative: Vec<usize>,
}

impl Pi0Partition {
    pub fn num_components(&self) -> usize {
        self.representative.len()
    }

    pub fn members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.component.iter().enumerate().filter(move |(_, &k)| k == c).map(|(x, _)| x)
    }
}

/// Breadth-first spanning forest, rooted at the smallest object of each component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    /// Letter from the parent into each object; `None` at roots.
    pub parent: Vec<Option<Letter>>,
    pub is_tree: Vec<bool>,
    /// Tree path from the component root to each object.
    pub root_path: Vec<Word>,
}

/// A finite directed graph presenting a free groupoid.
#[derive(Debug, Clone)]
pub struct Graph {
    objects: Vec<String>,
    generators: Vec<Generator>,
    object_index: HashMap<String, usize>,
    generator_index: HashMap<String, usize>,
    pi0: Pi0Partition,
    forest: SpanningForest,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.generators == other.generators
    }
}

impl Eq for Graph {}

impl Graph {
    /// `generators` are `(name, src, tgt)` triples referring to object labels.
    pub fn new<S: AsRef<str>>(objects: &[S], generators: &[(S, S, S)]) -> Result<Self, FreeGpdError> {
        let objects: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(FreeGpdError::DuplicateLabel(o.clone()));
            }
        }
        let lookup = |s: &str| object_index.get(s).copied().ok_or_else(|| FreeGpdError::UnknownObject(s.to_string()));
        let mut gens = Vec::with_capacity(generators.len());
        for (name, s, t) in generators {
            gens.push(Generator {
                name: name.as_ref().to_string(),
                src: lookup(s.as_ref())?,
                tgt: lookup(t.as_ref())?,
            });
        }
        Self::from_parts(objects, gens)
    }

    /// Graph on objects `x0, x1, …` with generators `g0, g1, …`.
    pub fn from_edges(num_objects: usize, edges: &[(usize, usize)]) -> Result<Self, FreeGpdError> {
        let objects = (0..num_objects).map(|i| format!("x{i}")).collect();
        let gens = edges
            .iter()
            .enumerate()
            .map(|(i, &(src, tgt))| Generator {
                name: format!("g{i}"),
                src,
                tgt,
            })
            .collect();
        Self::from_parts(objects, gens)
    }

    pub fn from_parts(objects: Vec<String>, generators: Vec<Generator>) -> Result<Self, FreeGpdError> {
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(FreeGpdError::DuplicateLabel(o.clone()));
            }
        }
        let mut generator_index = HashMap::new();
        for (i, gen) in generators.iter().enumerate() {
            if gen.src >= objects.len() {
                return Err(FreeGpdError::ObjectOutOfRange(gen.src));
            }
            if gen.tgt >= objects.len() {
                return Err(FreeGpdError::ObjectOutOfRange(gen.tgt));
            }
            if object_index.contains_key(&gen.name) || generator_index.insert(gen.name.clone(), i).is_some() {
                return Err(FreeGpdError::DuplicateLabel(gen.name.clone()));
            }
        }
        let (pi0, forest) = build_forest(objects.len(), &generators);
        Ok(Graph {
            objects,
            generators,
            object_index,
            generator_index,
            pi0,
            forest,
        })
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn object_id(&self, label: &str) -> Result<usize, FreeGpdError> {
        self.object_index
            .get(label)
            .copied()
            .ok_or_else(|| FreeGpdError::UnknownObject(label.to_string()))
    }

    pub fn generator_id(&self, name: &str) -> Result<usize, FreeGpdError> {
        self.generator_index
            .get(name)
            .copied()
            .ok_or_else(|| FreeGpdError::UnknownGenerator(name.to_string()))
    }

    pub fn pi0(&self) -> &Pi0Partition {
        &self.pi0
    }

    pub fn forest(&self) -> &SpanningForest {
        &self.forest
    }

    pub fn component_of(&self, x: usize) -> usize {
        self.pi0.component[x]
    }

    pub fn root_of(&self, x: usize) -> usize {
        self.pi0.representative[self.pi0.component[x]]
    }

    /// All letters leaving `x`, in letter order.
    pub fn letters_from(&self, x: usize) -> Vec<Letter> {
        let mut out = Vec::new();
        for (i, gen) in self.generators.iter().enumerate() {
            if gen.src == x {
                out.push(Letter::pos(i));
            }
            if gen.tgt == x {
                out.push(Letter::neg(i));
            }
        }
        out
    }

    /// Generators belonging to the spanning forest.
    pub fn tree_edges(&self) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| self.forest.is_tree[i]).collect()
    }

    /// Number of generators of the isotropy group in component `c`.
    pub fn isotropy_rank(&self, c: usize) -> usize {
        let objects = self.pi0.members(c).count();
        let gens = self.generators.iter().filter(|gen| self.pi0.component[gen.src] == c).count();
        gens + 1 - objects
    }

    /// Parses a word given as `(generator name, ±1)` pairs starting at `src`.
    pub fn parse_word(&self, src: usize, letters: &[(String, i64)]) -> Result<Word, FreeGpdError> {
        let mut ls = Vec::with_capacity(letters.len());
        for (name, e) in letters {
            let gen = self.generator_id(name)?;
            ls.push(match e {
                1 => Letter::pos(gen),
                -1 => Letter::neg(gen),
                _ => return Err(FreeGpdError::InvalidEndo(format!("exponent {e} on `{name}` is not ±1"))),
            });
        }
        Word::new(self, src, ls)
    }
}

fn build_forest(n: usize, gens: &[Generator]) -> (Pi0Partition, SpanningForest) {
    let mut adj: Vec<Vec<Letter>> = vec![Vec::new(); n];
    for (i, gen) in gens.iter().enumerate() {
        adj[gen.src].push(Letter::pos(i));
        adj[gen.tgt].push(Letter::neg(i));
    }
    let orient = |l: Letter| {
        let gen = &gens[l.gen];
        if l.inverse {
            gen.src
        } else {
            gen.tgt
        }
    };
    let mut component = vec![usize::MAX; n];
    let mut representative = Vec::new();
    let mut parent = vec![None; n];
    let mut is_tree = vec![false; gens.len()];
    let mut root_path: Vec<Word> = (0..n).map(Word::identity).collect();
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        let c = representative.len();
        representative.push(root);
        component[root] = c;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &l in &adj[x] {
                let y = orient(l);
                if component[y] != usize::MAX {
                    continue;
                }
                component[y] = c;
                parent[y] = Some(l);
                is_tree[l.gen] = true;
                let mut letters = root_path[x].letters.clone();
                letters.push(l);
                root_path[y] = Word {
                    src: root,
                    tgt: y,
                    letters,
                };
                queue.push_back(y);
            }
        }
    }
    (
        Pi0Partition {
            component,
            representative,
        },
        SpanningForest {
            parent,
            is_tree,
            root_path,
        },
    )
}

/// Undirected connected components of `g`.
pub fn pi0(g: &Graph) -> Pi0Partition {
    g.pi0.clone()
}

/// An endofunctor of the free groupoid on a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidEnd {
    object_map: Vec<usize>,
    generator_map: Vec<Word>,
}

impl GroupoidEnd {
    /// Validates endpoints and stores reduced images.
    pub fn new(g: &Graph, object_map: Vec<usize>, generator_map: Vec<Word>) -> Result<Self, FreeGpdError> {
        if object_map.len() != g.num_objects() {
            return Err(FreeGpdError::InvalidEndo(format!(
                "object map has {} entries for {} objects",
                object_map.len(),
                g.num_objects()
            )));
        }
        if generator_map.len() != g.num_generators() {
            return Err(FreeGpdError::InvalidEndo(format!(
                "generator map has {} entries for {} generators",
                generator_map.len(),
                g.num_generators()
            )));
        }
        if let Some(&bad) = object_map.iter().find(|&&y| y >= g.num_objects()) {
            return Err(FreeGpdError::ObjectOutOfRange(bad));
        }
        let mut images = Vec::with_capacity(generator_map.len());
        for (i, w) in generator_map.into_iter().enumerate() {
            // re-validate: words may come from another graph with the same shape
            let w = Word::new(g, w.src, w.letters)?;
            let gen = &g.generators[i];
            if w.src != object_map[gen.src] || w.tgt != object_map[gen.tgt] {
                return Err(FreeGpdError::InvalidEndo(format!(
                    "image of `{}` runs {} -> {}, expected {} -> {}",
                    gen.name,
                    g.objects[w.src],
                    g.objects[w.tgt],
                    g.objects[object_map[gen.src]],
                    g.objects[object_map[gen.tgt]]
                )));
            }
            images.push(reduce(&w));
        }
        Ok(GroupoidEnd {
            object_map,
            generator_map: images,
        })
    }

    pub fn identity(g: &Graph) -> Self {
        GroupoidEnd {
            object_map: (0..g.num_objects()).collect(),
            generator_map: (0..g.num_generators()).map(|i| Word::letter(g, Letter::pos(i))).collect(),
        }
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn generator_map(&self) -> &[Word] {
        &self.generator_map
    }

    pub fn image_object(&self, x: usize) -> usize {
        self.object_map[x]
    }

    pub fn image_generator(&self, gen: usize) -> &Word {
        &self.generator_map[gen]
    }

    pub fn image_letter(&self, l: Letter) -> Word {
        let w = &self.generator_map[l.gen];
        if l.inverse {
            invert(w)
        } else {
            w.clone()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.object_map.iter().enumerate().all(|(i, &x)| i == x)
            && self
                .generator_map
                .iter()
                .enumerate()
                .all(|(i, w)| w.letters.as_slice() == [Letter::pos(i)])
    }
}

/// Letterwise substitution, reduced.
pub fn apply_endo(phi: &GroupoidEnd, w: &Word) -> Result<Word, FreeGpdError> {
    if w.src >= phi.object_map.len() {
        return Err(FreeGpdError::ObjectOutOfRange(w.src));
    }
    let mut letters = Vec::new();
    for &l in &w.letters {
        let img = phi
            .generator_map
            .get(l.gen)
            .ok_or(FreeGpdError::GeneratorOutOfRange(l.gen))?;
        if l.inverse {
            letters.extend(img.letters.iter().rev().map(|m| m.inv()));
        } else {
            letters.extend_from_slice(&img.letters);
        }
    }
    Ok(Word {
        src: phi.object_map[w.src],
        tgt: phi.object_map[w.tgt],
        letters: reduce_letters(letters),
    })
}
