/// Reference-counted fixed-size banks for one decoder stage.
///
/// At most `limit` banks may be live at once. Exceeding it means the survivor
/// schedule failed to respect the stage budget, which is a bug.
#[derive(Debug, Clone)]
pub struct BankPool<T> {
    bank_len: usize,
    limit: usize,
    banks: Vec<Vec<T>>,
    refs: Vec<u32>,
    free: Vec<usize>,
    live: usize,
    peak: usize,
}

impl<T: Copy + Default> BankPool<T> {
    pub fn new(bank_len: usize, limit: usize) -> Self {
        Self {
            bank_len,
            limit,
            banks: Vec::new(),
            refs: Vec::new(),
            free: Vec::new(),
            live: 0,
            peak: 0,
        }
    }

    pub fn bank_len(&self) -> usize {
        self.bank_len
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn live(&self) -> usize {
        self.live
    }

    pub fn peak(&self) -> usize {
        self.peak
    }

    pub fn ref_count(&self, id: usize) -> u32 {
        self.refs[id]
    }

    /// A fresh bank with reference count 1. Contents are unspecified.
    pub fn allocate(&mut self) -> usize {
        assert!(
            self.live < self.limit,
            "bank budget of {} exceeded (bank length {})",
            self.limit,
            self.bank_len
        );
        let id = match self.free.pop() {
            Some(id) => id,
            None => {
                self.banks.push(vec![T::default(); self.bank_len]);
                self.refs.push(0);
                self.banks.len() - 1
            }
        };
        self.refs[id] = 1;
        self.live += 1;
        self.peak = self.peak.max(self.live);
        id
    }

    pub fn retain(&mut self, id: usize) {
        debug_assert!(self.refs[id] > 0, "retain of a dead bank");
        self.refs[id] += 1;
    }

    pub fn release(&mut self, id: usize) {
        debug_assert!(self.refs[id] > 0, "release of a dead bank");
        self.refs[id] -= 1;
        if self.refs[id] == 0 {
            self.free.push(id);
            self.live -= 1;
        }
    }

    /// Returns a bank the caller may write. A shared bank is copied into a new
    /// one and the caller's reference moves to the copy.
    pub fn make_unique(&mut self, id: usize) -> usize {
        if self.refs[id] == 1 {
            return id;
        }
        let fresh = self.allocate();
        let (src, dst) = if id < fresh {
            let (a, b) = self.banks.split_at_mut(fresh);
            (&a[id], &mut b[0])
        } else {
            let (a, b) = self.banks.split_at_mut(id);
            (&b[0], &mut a[fresh])
        };
        dst.copy_from_slice(src);
        self.refs[id] -= 1;
        fresh
    }

    /// Like [`make_unique`](Self::make_unique) but skips the copy; the caller
    /// overwrites the whole bank.
    pub fn make_unique_for_overwrite(&mut self, id: usize) -> usize {
        if self.refs[id] == 1 {
            return id;
        }
        let fresh = self.allocate();
        self.refs[id] -= 1;
        fresh
    }

    pub fn get(&self, id: usize) -> &[T] {
        &self.banks[id]
    }

    pub fn get_mut(&mut self, id: usize) -> &mut [T] {
        debug_assert_eq!(self.refs[id], 1, "write to a shared bank");
        &mut self.banks[id]
    }
}
