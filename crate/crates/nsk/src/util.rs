//! Small shared helpers.

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    classes: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            classes: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when the two elements were in different classes.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.classes -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    /// Dense relabeling: element -> class index in 0..class_count, classes
    /// numbered by first appearance.
    pub fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[x] = label[r];
        }
        out
    }
}

/// Union-find that additionally tracks a Z/2 "sign" between each element and
/// its class representative. `union_signed(a, b, s)` imposes
/// sign(a) + sign(b) = s; a contradiction is reported by returning `Err(())`.
#[derive(Clone, Debug)]
pub struct SignedUnionFind {
    parent: Vec<usize>,
    // parity between element and its parent
    parity: Vec<u8>,
    classes: usize,
}

impl SignedUnionFind {
    pub fn new(n: usize) -> SignedUnionFind {
        SignedUnionFind {
            parent: (0..n).collect(),
            parity: vec![0; n],
            classes: n,
        }
    }

    /// Returns (root, parity of x relative to root).
    pub fn find(&mut self, x: usize) -> (usize, u8) {
        if self.parent[x] == x {
            return (x, 0);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.parity[x] ^= p;
        (root, self.parity[x])
    }

    pub fn union_signed(&mut self, a: usize, b: usize, s: u8) -> Result<bool, ()> {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return if pa ^ pb == s { Ok(false) } else { Err(()) };
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ s;
        self.classes -= 1;
        Ok(true)
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }
}
