//! Endomorphism squares of the Int construction over relations.
//!
//! A [`Square`] on a carrier `X` holds four endo-relations, laid out as the
//! matrix
//!
//! ```text
//!   ( pass_left   left_turn  )
//!   ( right_turn  pass_right )
//! ```
//!
//! Read as a graph on four corner ports (top-left `TL`, top-right `TR`,
//! bottom-left `BL`, bottom-right `BR`), the entries are the edges
//! `pass_left: TL→BL`, `right_turn: TL→TR`, `pass_right: BR→TR` and
//! `left_turn: BR→BL`. Vertical composition glues two squares top to bottom,
//! horizontal composition glues them side by side; both take the union over
//! all paths between the outer ports.

use serde::{Deserialize, Serialize};

use crate::relalg::{Carrier, Rel, RelError};
use crate::serial::RelJson;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Square {
    carrier: Carrier,
    pass_left: Rel,
    left_turn: Rel,
    right_turn: Rel,
    pass_right: Rel,
}

fn ensure_endo(carrier: &Carrier, r: &Rel) -> Result<(), RelError> {
    for c in [r.dom(), r.cod()] {
        if c.size() != carrier.size() {
            return Err(RelError::DimensionMismatch {
                expected: carrier.size(),
                found: c.size(),
            });
        }
        if c != carrier {
            return Err(RelError::LabelMismatch);
        }
    }
    Ok(())
}

impl Square {
    pub fn new(pass_left: Rel, left_turn: Rel, right_turn: Rel, pass_right: Rel) -> Result<Self, RelError> {
        let carrier = pass_left.dom().clone();
        for r in [&pass_left, &left_turn, &right_turn, &pass_right] {
            ensure_endo(&carrier, r)?;
        }
        Ok(Square {
            carrier,
            pass_left,
            left_turn,
            right_turn,
            pass_right,
        })
    }

    /// Passes are the identity, turns are empty.
    pub fn identity(carrier: Carrier) -> Self {
        let id = Rel::identity(carrier.clone());
        let zero = Rel::empty(carrier.clone(), carrier.clone());
        Square {
            carrier,
            pass_left: id.clone(),
            left_turn: zero.clone(),
            right_turn: zero,
            pass_right: id,
        }
    }

    pub fn zero(carrier: Carrier) -> Self {
        let zero = Rel::empty(carrier.clone(), carrier.clone());
        Square {
            carrier,
            pass_left: zero.clone(),
            left_turn: zero.clone(),
            right_turn: zero.clone(),
            pass_right: zero,
        }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn pass_left(&self) -> &Rel {
        &self.pass_left
    }

    pub fn left_turn(&self) -> &Rel {
        &self.left_turn
    }

    pub fn right_turn(&self) -> &Rel {
        &self.right_turn
    }

    pub fn pass_right(&self) -> &Rel {
        &self.pass_right
    }

    /// The four entries in field order.
    pub fn entries(&self) -> [&Rel; 4] {
        [&self.pass_left, &self.left_turn, &self.right_turn, &self.pass_right]
    }

    /// Applies `f` to every entry.
    pub fn try_map(&self, mut f: impl FnMut(&Rel) -> Result<Rel, RelError>) -> Result<Self, RelError> {
        Square::new(
            f(&self.pass_left)?,
            f(&self.left_turn)?,
            f(&self.right_turn)?,
            f(&self.pass_right)?,
        )
    }

    /// Vertical composition. `first` is the right matrix factor; for word
    /// squares, `vcompose(&square(u), &square(v)) == square(uv)`.
    pub fn vcompose(second: &Square, first: &Square) -> Result<Square, RelError> {
        ensure_endo(&second.carrier, &first.pass_left)?;
        Ok(vcompose_unchecked(second, first))
    }

    /// Horizontal composition: `left` and `right` glued along a shared
    /// vertical edge.
    pub fn hcompose(left: &Square, right: &Square) -> Result<Square, RelError> {
        ensure_endo(&left.carrier, &right.pass_left)?;
        Ok(hcompose_with(left, right, HCOMPOSE_EDGES))
    }

    /// Swaps the passes and swaps the turns.
    pub fn dual(&self) -> Square {
        Square {
            carrier: self.carrier.clone(),
            pass_left: self.pass_right.clone(),
            left_turn: self.right_turn.clone(),
            right_turn: self.left_turn.clone(),
            pass_right: self.pass_left.clone(),
        }
    }

    pub fn is_subset(&self, other: &Square) -> bool {
        self.entries().iter().zip(other.entries()).all(|(a, b)| a.is_subset(b))
    }

    pub fn union(&self, other: &Square) -> Result<Square, RelError> {
        Square::new(
            self.pass_left.union(&other.pass_left)?,
            self.left_turn.union(&other.left_turn)?,
            self.right_turn.union(&other.right_turn)?,
            self.pass_right.union(&other.pass_right)?,
        )
    }
}

impl std::fmt::Debug for Square {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Square")
            .field("pass_left", &self.pass_left)
            .field("left_turn", &self.left_turn)
            .field("right_turn", &self.right_turn)
            .field("pass_right", &self.pass_right)
            .finish()
    }
}

pub(crate) fn vcompose_unchecked(second: &Square, first: &Square) -> Square {
    // second = (e f; g h), first = (a b; c d)
    let (e, f, g, h) = (
        &second.pass_left,
        &second.left_turn,
        &second.right_turn,
        &second.pass_right,
    );
    let (a, b, c, d) = (&first.pass_left, &first.left_turn, &first.right_turn, &first.pass_right);
    let bg_star = b.compose_unchecked(g).star_unchecked();
    let gb_star = g.compose_unchecked(b).star_unchecked();
    let e_bg = e.compose_unchecked(&bg_star);
    let d_gb = d.compose_unchecked(&gb_star);
    Square {
        carrier: second.carrier.clone(),
        pass_left: e_bg.compose_unchecked(a),
        left_turn: f.union_unchecked(&e_bg.compose_unchecked(b).compose_unchecked(h)),
        right_turn: c.union_unchecked(&d_gb.compose_unchecked(g).compose_unchecked(a)),
        pass_right: d_gb.compose_unchecked(h),
    }
}

/// Which square fields sit on the horizontal edges during horizontal
/// composition. The vertical edges are always the passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HEdgeMap {
    /// `right_turn` on the top edge (`TL→TR`), `left_turn` on the bottom edge
    /// (`BR→BL`); the same corner roles vertical composition uses.
    RightTurnOnTop,
    /// `left_turn` on the top edge, `right_turn` on the bottom edge.
    LeftTurnOnTop,
}

/// Frozen edge mapping; pinned by path enumeration on the one-point carrier.
/// The interchange law holds under neither mapping.
pub const HCOMPOSE_EDGES: HEdgeMap = HEdgeMap::RightTurnOnTop;

/// Horizontal composition under an explicit edge mapping.
///
/// With `left` supplying `c` (top), `a` (left edge), `b` (bottom), `d`
/// (shared edge) and `right` supplying `t` (top), `r` (shared edge), `s`
/// (bottom), `u` (right edge), the result is top `t(dr)*c`, left edge
/// `a ∪ b(rd)*rc`, bottom `b(rd)*s`, right edge `u ∪ t(dr)*ds`.
pub fn hcompose_with(left: &Square, right: &Square, edges: HEdgeMap) -> Square {
    let top_bottom = |sq: &Square| match edges {
        HEdgeMap::RightTurnOnTop => (sq.right_turn.clone(), sq.left_turn.clone()),
        HEdgeMap::LeftTurnOnTop => (sq.left_turn.clone(), sq.right_turn.clone()),
    };
    let (c, b) = top_bottom(left);
    let (a, d) = (&left.pass_left, &left.pass_right);
    let (t, s) = top_bottom(right);
    let (r, u) = (&right.pass_left, &right.pass_right);

    let dr_star = d.compose_unchecked(r).star_unchecked();
    let rd_star = r.compose_unchecked(d).star_unchecked();
    let t_dr = t.compose_unchecked(&dr_star);
    let b_rd = b.compose_unchecked(&rd_star);

    let top = t_dr.compose_unchecked(&c);
    let left_edge = a.union_unchecked(&b_rd.compose_unchecked(r).compose_unchecked(&c));
    let bottom = b_rd.compose_unchecked(&s);
    let right_edge = u.union_unchecked(&t_dr.compose_unchecked(d).compose_unchecked(&s));

    let (right_turn, left_turn) = match edges {
        HEdgeMap::RightTurnOnTop => (top, bottom),
        HEdgeMap::LeftTurnOnTop => (bottom, top),
    };
    Square {
        carrier: left.carrier.clone(),
        pass_left: left_edge,
        left_turn,
        right_turn,
        pass_right: right_edge,
    }
}

/// Serialized form: carrier labels plus the four named relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareJson {
    pub carrier: Vec<String>,
    pub pass_left: RelJson,
    pub left_turn: RelJson,
    pub right_turn: RelJson,
    pub pass_right: RelJson,
}

impl From<&Square> for SquareJson {
    fn from(sq: &Square) -> Self {
        SquareJson {
            carrier: sq.carrier.label_list(),
            pass_left: RelJson::from(&sq.pass_left),
            left_turn: RelJson::from(&sq.left_turn),
            right_turn: RelJson::from(&sq.right_turn),
            pass_right: RelJson::from(&sq.pass_right),
        }
    }
}

impl SquareJson {
    pub fn to_square(&self) -> Result<Square, RelError> {
        let carrier = Carrier::labeled(self.carrier.iter().cloned())?;
        let rel = |r: &RelJson| r.to_rel_on(&carrier, &carrier);
        Square::new(
            rel(&self.pass_left)?,
            rel(&self.left_turn)?,
            rel(&self.right_turn)?,
            rel(&self.pass_right)?,
        )
    }
}
