//! A persistent list with constant-time clone, append and prepend.
//!
//! Threads of the simulation copy their data on every fork, so anything a
//! thread carries must be cheap to duplicate. The list is kept as two shared
//! linked spines: a cons spine holding the front elements and a snoc spine
//! holding the back elements (most recent first).

use std::fmt;
use std::sync::Arc;

struct Cell<T> {
    value: T,
    next: Link<T>,
}

type Link<T> = Option<Arc<Cell<T>>>;

fn drop_link<T>(mut link: Link<T>) {
    // Unlink iteratively; the default recursive drop overflows on long spines.
    while let Some(cell) = link.take() {
        match Arc::try_unwrap(cell) {
            Ok(mut cell) => link = cell.next.take(),
            Err(_) => break,
        }
    }
}

pub struct PList<T> {
    front: Link<T>,
    back: Link<T>,
    front_len: usize,
    back_len: usize,
}

impl<T> PList<T> {
    pub const fn new() -> Self {
        PList {
            front: None,
            back: None,
            front_len: 0,
            back_len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.front_len + self.back_len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Appends on the right (snoc).
    pub fn push_back(&mut self, value: T) {
        let next = self.back.take();
        self.back = Some(Arc::new(Cell { value, next }));
        self.back_len += 1;
    }

    /// Prepends on the left (cons).
    pub fn push_front(&mut self, value: T) {
        let next = self.front.take();
        self.front = Some(Arc::new(Cell { value, next }));
        self.front_len += 1;
    }

    pub fn snoc(mut self, value: T) -> Self {
        self.push_back(value);
        self
    }

    pub fn cons(mut self, value: T) -> Self {
        self.push_front(value);
        self
    }

    pub fn iter(&self) -> Iter<'_, T> {
        let mut back = Vec::with_capacity(self.back_len);
        let mut link = &self.back;
        while let Some(cell) = link {
            back.push(&cell.value);
            link = &cell.next;
        }
        Iter {
            front: &self.front,
            back,
        }
    }
}

impl<T: Clone> PList<T> {
    pub fn to_vec(&self) -> Vec<T> {
        self.iter().cloned().collect()
    }
}

impl<T> Default for PList<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for PList<T> {
    fn clone(&self) -> Self {
        PList {
            front: self.front.clone(),
            back: self.back.clone(),
            front_len: self.front_len,
            back_len: self.back_len,
        }
    }
}

impl<T> Drop for PList<T> {
    fn drop(&mut self) {
        drop_link(self.front.take());
        drop_link(self.back.take());
    }
}

impl<T: PartialEq> PartialEq for PList<T> {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().eq(other.iter())
    }
}

impl<T: Eq> Eq for PList<T> {}

impl<T: fmt::Debug> fmt::Debug for PList<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl<T> FromIterator<T> for PList<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut list = PList::new();
        for value in iter {
            list.push_back(value);
        }
        list
    }
}

pub struct Iter<'a, T> {
    front: &'a Link<T>,
    back: Vec<&'a T>,
}

impl<'a, T> Iterator for Iter<'a, T> {
    type Item = &'a T;

    fn next(&mut self) -> Option<&'a T> {
        if let Some(cell) = self.front {
            self.front = &cell.next;
            return Some(&cell.value);
        }
        self.back.pop()
    }
}

impl<'a, T> IntoIterator for &'a PList<T> {
    type Item = &'a T;
    type IntoIter = Iter<'a, T>;

    fn into_iter(self) -> Iter<'a, T> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_ends_keep_order() {
        let list = PList::new().snoc(2).snoc(3).cons(1).cons(0).snoc(4);
        assert_eq!(list.to_vec(), vec![0, 1, 2, 3, 4]);
        assert_eq!(list.len(), 5);
    }

    #[test]
    fn clones_are_independent() {
        let base: PList<u32> = (0..3).collect();
        let a = base.clone().snoc(10);
        let b = base.clone().snoc(20);
        assert_eq!(base.to_vec(), vec![0, 1, 2]);
        assert_eq!(a.to_vec(), vec![0, 1, 2, 10]);
        assert_eq!(b.to_vec(), vec![0, 1, 2, 20]);
    }

    #[test]
    fn long_lists_drop_without_overflow() {
        let list: PList<u64> = (0..1_000_000).collect();
        assert_eq!(list.len(), 1_000_000);
        drop(list);
    }
}
