use crate::model::{Graph, TestPath};
use crate::requirements::Requirement;

/// Set-cover view of a path set: requirements form the universe and each
/// path is the subset of requirements it contains.
#[derive(Debug, Clone)]
pub struct CoverageMatrix {
    paths: Vec<TestPath>,
    requirements: Vec<Requirement>,
    covers: Vec<Vec<usize>>,
    /// For each requirement, the other requirements that contain it.
    contained_in: Vec<Vec<usize>>,
}

impl CoverageMatrix {
    pub fn build(paths: Vec<TestPath>, requirements: Vec<Requirement>, graph: &Graph) -> Self {
        let covers = paths
            .iter()
            .map(|p| {
                requirements
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.is_covered_by(p, graph))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let contained_in = requirements
            .iter()
            .enumerate()
            .map(|(i, r)| {
                requirements
                    .iter()
                    .enumerate()
                    .filter(|(j, other)| *j != i && r.is_subpath_of(other, graph))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Self {
            paths,
            requirements,
            covers,
            contained_in,
        }
    }

    /// Matrix with abstract subsets and no containment between
    /// requirements. Paths and requirements are placeholders.
    pub fn from_subsets(subsets: Vec<Vec<usize>>, requirement_count: usize) -> Self {
        let covers: Vec<Vec<usize>> = subsets
            .into_iter()
            .map(|mut s| {
                s.retain(|&r| r < requirement_count);
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let paths = (0..covers.len())
            .map(|i| TestPath::at_vertex(crate::model::VertexId(i)))
            .collect();
        let requirements = (0..requirement_count)
            .map(|i| Requirement::VertexVisit(crate::model::VertexId(i)))
            .collect();
        Self {
            paths,
            requirements,
            covers,
            contained_in: vec![Vec::new(); requirement_count],
        }
    }

    pub fn paths(&self) -> &[TestPath] {
        &self.paths
    }

    pub fn requirements(&self) -> &[Requirement] {
        &self.requirements
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn requirement_count(&self) -> usize {
        self.requirements.len()
    }

    /// Requirement indices covered by path `i`, ascending.
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub(crate) fn contained_in(&self, r: usize) -> &[usize] {
        &self.contained_in[r]
    }

    /// Requirements that at least one path covers.
    pub fn coverable(&self) -> Vec<bool> {
        let mut mask = vec![false; self.requirements.len()];
        for c in &self.covers {
            for &r in c {
                mask[r] = true;
            }
        }
        mask
    }

    pub fn coverable_count(&self) -> usize {
        self.coverable().iter().filter(|&&b| b).count()
    }

    /// Number of requirements covered by no selected path.
    pub fn uncovered_count(&self, selected: &[usize]) -> usize {
        let mut hit = vec![false; self.requirements.len()];
        for &p in selected {
            for &r in &self.covers[p] {
                hit[r] = true;
            }
        }
        hit.iter().filter(|&&h| !h).count()
    }

    /// True iff `selected` covers every coverable requirement.
    pub fn covers_all_coverable(&self, selected: &[usize]) -> bool {
        let mut hit = vec![false; self.requirements.len()];
        for &p in selected {
            for &r in &self.covers[p] {
                hit[r] = true;
            }
        }
        hit.iter().zip(self.coverable()).all(|(h, c)| *h || !c)
    }

    /// Copy of the matrix keeping only coverable requirements.
    pub fn restrict_to_coverable(&self) -> CoverageMatrix {
        let mask = self.coverable();
        let mut remap = vec![usize::MAX; mask.len()];
        let mut requirements = Vec::new();
        for (i, keep) in mask.iter().enumerate() {
            if *keep {
                remap[i] = requirements.len();
                requirements.push(self.requirements[i].clone());
            }
        }
        let covers = self
            .covers
            .iter()
            .map(|c| c.iter().map(|&r| remap[r]).collect())
            .collect();
        let contained_in = (0..mask.len())
            .filter(|&i| mask[i])
            .map(|i| {
                self.contained_in[i]
                    .iter()
                    .filter(|&&j| mask[j])
                    .map(|&j| remap[j])
                    .collect()
            })
            .collect();
        CoverageMatrix {
            paths: self.paths.clone(),
            requirements,
            covers,
            contained_in,
        }
    }

    pub fn paths_of(&self, selected: &[usize]) -> Vec<TestPath> {
        selected.iter().map(|&i| self.paths[i].clone()).collect()
    }

    pub fn steps_of(&self, selected: &[usize]) -> usize {
        selected.iter().map(|&i| self.paths[i].len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrict_drops_uncoverable() {
        let m = CoverageMatrix::from_subsets(vec![vec![0, 2], vec![2]], 4);
        assert_eq!(m.coverable(), vec![true, false, true, false]);
        let r = m.restrict_to_coverable();
        assert_eq!(r.requirement_count(), 2);
        assert_eq!(r.covers(0), &[0, 1]);
        assert_eq!(r.covers(1), &[1]);
        assert_eq!(m.uncovered_count(&[1]), 3);
        assert!(m.covers_all_coverable(&[0]));
        assert!(!m.covers_all_coverable(&[1]));
    }
}
