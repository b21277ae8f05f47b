/// Euler tour + sparse table over node depths.
#[derive(Clone, Debug, Default)]
pub(crate) struct LcaIndex {
    first: Vec<u32>,
    levels: Vec<Vec<u32>>,
    depth: Vec<u32>,
}

impl LcaIndex {
    /// `children` lists children per node, `root` is the tour start.
    pub fn new(children: &[Vec<usize>], depth: Vec<u32>, root: usize) -> Self {
        let n = children.len();
        let mut first = vec![0u32; n];
        let mut tour: Vec<u32> = Vec::with_capacity(2 * n);
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, k) = *top;
            if k == 0 {
                first[v] = tour.len() as u32;
            }
            tour.push(v as u32);
            if k < children[v].len() {
                top.1 += 1;
                stack.push((children[v][k], 0));
            } else {
                stack.pop();
            }
        }
        let mut levels = vec![tour];
        let mut width = 1;
        while 2 * width <= levels[0].len() {
            let prev = levels.last().unwrap();
            let next: Vec<u32> = (0..prev.len() - width)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + width]);
                    if depth[a as usize] <= depth[b as usize] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            levels.push(next);
            width *= 2;
        }
        LcaIndex { first, levels, depth }
    }

    pub fn query(&self, u: usize, v: usize) -> usize {
        let (mut l, mut r) = (self.first[u] as usize, self.first[v] as usize);
        if l > r {
            std::mem::swap(&mut l, &mut r);
        }
        let span = r - l + 1;
        let k = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let level = &self.levels[k];
        let (a, b) = (level[l], level[r + 1 - (1 << k)]);
        if self.depth[a as usize] <= self.depth[b as usize] {
            a as usize
        } else {
            b as usize
        }
    }
}
