//! Collapsing a non-loop edge: an equivalence of free groupoids.

use super::{apply_endo, reduce_letters, FreeGpdError, Generator, Graph, GroupoidEnd, Letter, Word};

/// The quotient `q: A → A'` contracting edge `e: x → y` onto `x`, with its
/// section `i: A' → A`.
#[derive(Debug, Clone)]
pub struct EdgeCollapse {
    pub edge: usize,
    pub source: Graph,
    pub target: Graph,
    /// `q` on objects.
    pub object_to_new: Vec<usize>,
    /// `i` on objects.
    pub object_to_old: Vec<usize>,
    /// `q` on generators; `None` for the collapsed edge.
    pub gen_to_new: Vec<Option<usize>>,
    pub gen_to_old: Vec<usize>,
}

impl EdgeCollapse {
    pub fn new(g: &Graph, edge: usize) -> Result<Self, FreeGpdError> {
        let gen = g
            .generators()
            .get(edge)
            .ok_or(FreeGpdError::GeneratorOutOfRange(edge))?;
        if gen.src == gen.tgt {
            return Err(FreeGpdError::NotCollapsible(edge, "edge is a loop".into()));
        }
        let (keep, gone) = (gen.src, gen.tgt);
        let object_to_old: Vec<usize> = (0..g.num_objects()).filter(|&x| x != gone).collect();
        let mut object_to_new = vec![0; g.num_objects()];
        for (n, &o) in object_to_old.iter().enumerate() {
            object_to_new[o] = n;
        }
        object_to_new[gone] = object_to_new[keep];
        let gen_to_old: Vec<usize> = (0..g.num_generators()).filter(|&i| i != edge).collect();
        let mut gen_to_new = vec![None; g.num_generators()];
        for (n, &o) in gen_to_old.iter().enumerate() {
            gen_to_new[o] = Some(n);
        }
        let objects = object_to_old.iter().map(|&o| g.objects()[o].clone()).collect();
        let generators = gen_to_old
            .iter()
            .map(|&o| {
                let old = &g.generators()[o];
                Generator {
                    name: old.name.clone(),
                    src: object_to_new[old.src],
                    tgt: object_to_new[old.tgt],
                }
            })
            .collect();
        Ok(EdgeCollapse {
            edge,
            source: g.clone(),
            target: Graph::from_parts(objects, generators)?,
            object_to_new,
            object_to_old,
            gen_to_new,
            gen_to_old,
        })
    }

    /// `q` on words.
    pub fn quotient_word(&self, w: &Word) -> Word {
        let letters = reduce_letters(w.letters().iter().filter_map(|l| {
            self.gen_to_new[l.gen].map(|gen| Letter {
                gen,
                inverse: l.inverse,
            })
        }));
        Word::from_parts(self.object_to_new[w.src()], self.object_to_new[w.tgt()], letters)
    }

    /// `i` on a generator of the collapsed graph.
    fn include_letter(&self, l: Letter) -> Vec<Letter> {
        let old = self.gen_to_old[l.gen];
        let gone = self.source.generators()[self.edge].tgt;
        let gen = &self.source.generators()[old];
        let e = Letter::pos(self.edge);
        let mut out = Vec::with_capacity(3);
        if gen.src == gone {
            out.push(e);
        }
        out.push(Letter::pos(old));
        if gen.tgt == gone {
            out.push(e.inv());
        }
        if l.inverse {
            out.reverse();
            out.iter_mut().for_each(|m| *m = m.inv());
        }
        out
    }

    /// `i` on words.
    pub fn include_word(&self, w: &Word) -> Word {
        let letters = reduce_letters(w.letters().iter().flat_map(|&l| self.include_letter(l)));
        Word::from_parts(self.object_to_old[w.src()], self.object_to_old[w.tgt()], letters)
    }

    /// The transported endofunctor `q ∘ φ ∘ i`.
    pub fn transport(&self, phi: &GroupoidEnd) -> Result<GroupoidEnd, FreeGpdError> {
        let object_map = self
            .object_to_old
            .iter()
            .map(|&o| self.object_to_new[phi.image_object(o)])
            .collect();
        let mut generator_map = Vec::with_capacity(self.gen_to_old.len());
        for n in 0..self.gen_to_old.len() {
            let included = self.include_word(&Word::letter(&self.target, Letter::pos(n)));
            generator_map.push(self.quotient_word(&apply_endo(phi, &included)?));
        }
        GroupoidEnd::new(&self.target, object_map, generator_map)
    }
}
