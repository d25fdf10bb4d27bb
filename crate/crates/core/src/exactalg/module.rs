use std::fmt;
use std::sync::OnceLock;

use super::lattice::Lattice;
use super::matrix::Matrix;
use super::normal_form::{kernel_basis, smith_with, SmithOptions};
use super::ring::{Ring, RingTag};
use super::AlgebraError;

/// Finitely presented module: the cokernel of `relations: R^r -> R^g`.
#[derive(Clone)]
pub struct FPModule<R: Ring> {
    relations: Matrix<R>,
    lattice: OnceLock<Lattice<R>>,
    invariants: OnceLock<ModuleInvariants<R>>,
}

/// Isomorphism invariants: non-unit invariant factors and free rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleInvariants<R> {
    pub torsion: Vec<R>,
    pub free_rank: usize,
}

impl<R: Ring> ModuleInvariants<R> {
    pub fn is_zero(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

impl<R: Ring> fmt::Display for ModuleInvariants<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = self
            .torsion
            .iter()
            .map(|d| format!("{}/{}", R::TAG, d))
            .collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                R::TAG.to_string()
            } else {
                format!("{}^{}", R::TAG, self.free_rank)
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

/// A presentation change `old -> new` with mutually inverse module maps.
#[derive(Clone, Debug)]
pub struct Simplified<R: Ring> {
    pub module: FPModule<R>,
    /// `new x old` matrix of the isomorphism old -> new.
    pub to_new: Matrix<R>,
    /// `old x new` matrix of the inverse isomorphism.
    pub to_old: Matrix<R>,
}

impl<R: Ring> FPModule<R> {
    pub fn new(relations: Matrix<R>) -> Self {
        FPModule {
            relations,
            lattice: OnceLock::new(),
            invariants: OnceLock::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::new(Matrix::zeros(rank, 0))
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `R^g / span(relations)` with `g = relations.rows()`.
    pub fn with_relations(generators: usize, relations: Matrix<R>) -> Result<Self, AlgebraError> {
        if relations.rows() != generators {
            return Err(AlgebraError::Shape(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        Ok(Self::new(relations))
    }

    /// Direct sum of cyclic modules `R/(d_i)`; `d = 0` gives a free summand.
    pub fn from_orders(orders: &[R]) -> Self {
        let n = orders.len();
        let cols: Vec<Vec<R>> = orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                let mut c = vec![R::zero(); n];
                c[i] = d.clone();
                c
            })
            .collect();
        Self::new(Matrix::from_columns(n, &cols))
    }

    pub fn ring(&self) -> RingTag {
        R::TAG
    }

    pub fn generators(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &Matrix<R> {
        &self.relations
    }

    pub fn is_free_presentation(&self) -> bool {
        self.relations.is_zero()
    }

    /// The submodule of `R^g` spanned by the relations.
    pub fn relation_lattice(&self) -> &Lattice<R> {
        self.lattice
            .get_or_init(|| Lattice::from_columns(&self.relations))
    }

    pub fn element_is_zero(&self, v: &[R]) -> bool {
        if self.relations.cols() == 0 {
            return v.iter().all(R::is_zero);
        }
        self.relation_lattice().contains(v)
    }

    /// Canonical representative of an element.
    pub fn normalize(&self, v: &[R]) -> Vec<R> {
        if self.relations.cols() == 0 {
            return v.to_vec();
        }
        self.relation_lattice().reduce(v)
    }

    pub fn invariants(&self) -> &ModuleInvariants<R> {
        self.invariants.get_or_init(|| {
            let s = smith_with(&self.relations, SmithOptions::NONE);
            let torsion: Vec<R> = s
                .diagonal
                .iter()
                .filter(|d| !d.is_unit())
                .cloned()
                .collect();
            ModuleInvariants {
                torsion,
                free_rank: self.generators() - s.rank(),
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        if self.relations.cols() == 0 {
            return self.generators() == 0;
        }
        self.invariants().is_zero()
    }

    pub fn is_isomorphic(&self, other: &FPModule<R>) -> bool {
        self.invariants() == other.invariants()
    }

    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        self.invariants().free_rank
    }

    pub fn direct_sum(&self, other: &FPModule<R>) -> FPModule<R> {
        FPModule::new(self.relations.block_diag(&other.relations))
    }

    /// Equivalent presentation with diagonal relations and no unit orders.
    pub fn simplify(&self) -> Simplified<R> {
        let g = self.generators();
        if self.relations.cols() == 0 || self.relations.is_zero() {
            return Simplified {
                module: FPModule::free(g),
                to_new: Matrix::identity(g),
                to_old: Matrix::identity(g),
            };
        }
        let s = smith_with(
            &self.relations,
            SmithOptions {
                u: true,
                u_inv: true,
                v: false,
            },
        );
        let keep: Vec<usize> = (0..g)
            .filter(|&i| i >= s.rank() || !s.diagonal[i].is_unit())
            .collect();
        let orders: Vec<R> = keep
            .iter()
            .map(|&i| {
                if i < s.rank() {
                    s.diagonal[i].clone()
                } else {
                    R::zero()
                }
            })
            .collect();
        let u = s.u.expect("tracked");
        let u_inv = s.u_inv.expect("tracked");
        let module = FPModule::from_orders(&orders);
        let _ = module.invariants.set(ModuleInvariants {
            torsion: orders.iter().filter(|d| !d.is_zero()).cloned().collect(),
            free_rank: orders.iter().filter(|d| d.is_zero()).count(),
        });
        Simplified {
            module,
            to_new: u.select_rows(&keep),
            to_old: u_inv.select_columns(&keep),
        }
    }
}

impl<R: Ring> PartialEq for FPModule<R> {
    fn eq(&self, other: &Self) -> bool {
        self.relations == other.relations
    }
}

impl<R: Ring> Eq for FPModule<R> {}

impl<R: Ring> fmt::Debug for FPModule<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FPModule")
            .field("generators", &self.generators())
            .field("relations", &self.relations)
            .finish()
    }
}

/// A homomorphism of presented modules given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom<R: Ring> {
    pub source: FPModule<R>,
    pub target: FPModule<R>,
    /// target generators x source generators
    pub matrix: Matrix<R>,
}

/// Kernel, image and cokernel of a homomorphism with their structure maps.
#[derive(Clone, Debug)]
pub struct HomDecomposition<R: Ring> {
    pub kernel: FPModule<R>,
    pub kernel_inclusion: ModuleHom<R>,
    pub image: FPModule<R>,
    pub image_inclusion: ModuleHom<R>,
    pub cokernel: FPModule<R>,
    pub cokernel_projection: ModuleHom<R>,
}

impl<R: Ring> ModuleHom<R> {
    /// Checked constructor.
    pub fn new(
        source: FPModule<R>,
        target: FPModule<R>,
        matrix: Matrix<R>,
    ) -> Result<Self, AlgebraError> {
        let h = Self::new_unchecked(source, target, matrix)?;
        h.check_well_defined()?;
        Ok(h)
    }

    /// Only checks shapes.
    pub fn new_unchecked(
        source: FPModule<R>,
        target: FPModule<R>,
        matrix: Matrix<R>,
    ) -> Result<Self, AlgebraError> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(AlgebraError::Shape(format!(
                "hom matrix is {}x{} but modules have {} and {} generators",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        Ok(ModuleHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(m: &FPModule<R>) -> Self {
        ModuleHom {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.generators()),
        }
    }

    pub fn zero(source: &FPModule<R>, target: &FPModule<R>) -> Self {
        ModuleHom {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.generators(), source.generators()),
        }
    }

    pub fn check_well_defined(&self) -> Result<(), AlgebraError> {
        let images = self.matrix.mul(self.source.relations());
        for j in 0..images.cols() {
            if !self.target.element_is_zero(&images.column(j)) {
                return Err(AlgebraError::IllDefined(format!(
                    "source relation {j} does not map to zero in the target"
                )));
            }
        }
        Ok(())
    }

    /// `other ∘ self`
    pub fn then(&self, other: &ModuleHom<R>) -> ModuleHom<R> {
        assert_eq!(self.target.generators(), other.source.generators());
        ModuleHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix),
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.element_is_zero(&self.matrix.column(j)))
    }

    /// Equality as maps (modulo target relations).
    pub fn same_map(&self, other: &ModuleHom<R>) -> bool {
        let d = self.matrix.sub(&other.matrix);
        (0..d.cols()).all(|j| self.target.element_is_zero(&d.column(j)))
    }

    /// The lattice `{x : A x ∈ rel(target)}` in source generator coordinates.
    fn preimage_lattice(&self) -> Lattice<R> {
        let tgt = self.target.relation_lattice().basis_columns();
        let stacked = self.matrix.hcat(&tgt);
        let k = kernel_basis(&stacked);
        let g = self.source.generators();
        let top: Vec<usize> = (0..g).collect();
        Lattice::from_columns(&k.select_rows(&top))
    }

    pub fn kernel_subobject(&self) -> Subobject<R> {
        let l = self.preimage_lattice();
        Subobject::new_unchecked(self.source.clone(), l.basis_columns())
    }

    pub fn image_subobject(&self) -> Subobject<R> {
        Subobject::new_unchecked(self.target.clone(), self.matrix.clone())
    }

    pub fn cokernel(&self) -> FPModule<R> {
        FPModule::new(self.target.relations().hcat(&self.matrix))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_subobject().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn decompose(&self) -> Result<HomDecomposition<R>, AlgebraError> {
        self.check_well_defined()?;
        let pre = self.preimage_lattice();
        let kb = pre.basis_columns();
        // relations of the source expressed in the kernel basis
        let rel = self.source.relations();
        let mut cols = Vec::with_capacity(rel.cols());
        for j in 0..rel.cols() {
            let c = pre
                .coordinates(&rel.column(j))
                .expect("source relations lie in the kernel lattice");
            cols.push(c);
        }
        let kernel = FPModule::new(Matrix::from_columns(kb.cols(), &cols));
        let kernel_inclusion = ModuleHom {
            source: kernel.clone(),
            target: self.source.clone(),
            matrix: kb.clone(),
        };
        let image = FPModule::new(kb);
        let image_inclusion = ModuleHom {
            source: image.clone(),
            target: self.target.clone(),
            matrix: self.matrix.clone(),
        };
        let cokernel = self.cokernel();
        let cokernel_projection = ModuleHom {
            source: self.target.clone(),
            target: cokernel.clone(),
            matrix: Matrix::identity(self.target.generators()),
        };
        Ok(HomDecomposition {
            kernel,
            kernel_inclusion,
            image,
            image_inclusion,
            cokernel,
            cokernel_projection,
        })
    }
}

/// Kernel, image and cokernel of `phi`.
pub fn hom_decompose<R: Ring>(phi: &ModuleHom<R>) -> Result<HomDecomposition<R>, AlgebraError> {
    phi.decompose()
}

/// Submodule of an ambient module generated by the given columns.
#[derive(Clone)]
pub struct Subobject<R: Ring> {
    ambient: FPModule<R>,
    generators: Matrix<R>,
    canonical: OnceLock<Lattice<R>>,
}

impl<R: Ring> Subobject<R> {
    pub fn new(ambient: FPModule<R>, generators: Matrix<R>) -> Result<Self, AlgebraError> {
        if generators.rows() != ambient.generators() {
            return Err(AlgebraError::Shape(format!(
                "subobject generators have {} rows, ambient has {} generators",
                generators.rows(),
                ambient.generators()
            )));
        }
        Ok(Self::new_unchecked(ambient, generators))
    }

    pub(crate) fn new_unchecked(ambient: FPModule<R>, generators: Matrix<R>) -> Self {
        Subobject {
            ambient,
            generators,
            canonical: OnceLock::new(),
        }
    }

    pub fn zero(ambient: &FPModule<R>) -> Self {
        Self::new_unchecked(ambient.clone(), Matrix::zeros(ambient.generators(), 0))
    }

    pub fn whole(ambient: &FPModule<R>) -> Self {
        Self::new_unchecked(ambient.clone(), Matrix::identity(ambient.generators()))
    }

    pub fn ambient(&self) -> &FPModule<R> {
        &self.ambient
    }

    pub fn generators(&self) -> &Matrix<R> {
        &self.generators
    }

    /// Preimage lattice in the ambient free cover (generators plus relations),
    /// in Hermite form.
    pub fn canonical_lattice(&self) -> &Lattice<R> {
        self.canonical
            .get_or_init(|| Lattice::from_columns(&self.generators.hcat(self.ambient.relations())))
    }

    /// Canonical generator matrix: equal subobjects have equal matrices.
    pub fn canonical_form(&self) -> Matrix<R> {
        self.canonical_lattice().basis_columns()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.generators.cols())
            .all(|j| self.ambient.element_is_zero(&self.generators.column(j)))
    }

    pub fn contains(&self, other: &Subobject<R>) -> bool {
        self.canonical_lattice()
            .contains_lattice(other.canonical_lattice())
    }

    pub fn contains_element(&self, v: &[R]) -> bool {
        self.canonical_lattice().contains(v)
    }

    fn check_ambient(&self, other: &Subobject<R>) -> Result<(), AlgebraError> {
        if self.ambient != other.ambient {
            return Err(AlgebraError::AmbientMismatch);
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subobject<R>) -> Result<Subobject<R>, AlgebraError> {
        self.check_ambient(other)?;
        Ok(Subobject::from_lattice(
            self.ambient.clone(),
            self.canonical_lattice().sum(other.canonical_lattice()),
        ))
    }

    pub fn intersection(&self, other: &Subobject<R>) -> Result<Subobject<R>, AlgebraError> {
        self.check_ambient(other)?;
        Ok(Subobject::from_lattice(
            self.ambient.clone(),
            self.canonical_lattice()
                .intersection(other.canonical_lattice()),
        ))
    }

    fn from_lattice(ambient: FPModule<R>, l: Lattice<R>) -> Subobject<R> {
        let s = Subobject::new_unchecked(ambient, l.basis_columns());
        let _ = s.canonical.set(l);
        s
    }

    /// The subobject as a module in its own right, with its inclusion.
    pub fn as_module(&self) -> (FPModule<R>, ModuleHom<R>) {
        let incl = ModuleHom {
            source: FPModule::free(self.generators.cols()),
            target: self.ambient.clone(),
            matrix: self.generators.clone(),
        };
        let image = incl.preimage_lattice();
        let m = FPModule::new(image.basis_columns());
        let incl = ModuleHom {
            source: m.clone(),
            target: self.ambient.clone(),
            matrix: self.generators.clone(),
        };
        (m, incl)
    }

    pub fn invariants(&self) -> ModuleInvariants<R> {
        self.as_module().0.invariants().clone()
    }

    /// Ambient modulo this subobject.
    pub fn quotient(&self) -> FPModule<R> {
        FPModule::new(self.ambient.relations().hcat(&self.generators))
    }
}

impl<R: Ring> PartialEq for Subobject<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.canonical_lattice() == other.canonical_lattice()
    }
}

impl<R: Ring> Eq for Subobject<R> {}

impl<R: Ring> fmt::Debug for Subobject<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subobject")
            .field("ambient_generators", &self.ambient.generators())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Sum and intersection of a family of subobjects of one ambient module.
#[derive(Clone, Debug)]
pub struct SubobjectOps<R: Ring> {
    pub sum: Subobject<R>,
    pub intersection: Subobject<R>,
}

pub fn subobject_ops<R: Ring>(parts: &[Subobject<R>]) -> Result<SubobjectOps<R>, AlgebraError> {
    let first = parts.first().ok_or(AlgebraError::Empty)?;
    let mut sum = first.clone();
    let mut inter = first.clone();
    for p in &parts[1..] {
        sum = sum.sum(p)?;
        inter = inter.intersection(p)?;
    }
    Ok(SubobjectOps {
        sum,
        intersection: inter,
    })
}

pub fn module_invariants<R: Ring>(m: &FPModule<R>) -> ModuleInvariants<R> {
    m.invariants().clone()
}
