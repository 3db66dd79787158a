//! Sparse byte-addressable memory covering the full 32-bit address space.
//!
//! Storage is split into 4 KiB pages allocated on the first non-zero write.
//! Unallocated pages read as zero, and a page that holds only zeros is
//! indistinguishable from an absent one: equality compares the canonical
//! contents, not the set of allocated pages. Every multi-byte access is
//! little-endian and wraps its addresses modulo 2^32.

use std::collections::BTreeMap;

pub const PAGE_BITS: u32 = 12;
pub const PAGE_SIZE: usize = 1 << PAGE_BITS;
const PAGE_MASK: u32 = (PAGE_SIZE as u32) - 1;
/// Number of pages in the 2^32-byte space.
pub const PAGE_COUNT: u32 = 1 << (32 - PAGE_BITS);

type Page = Box<[u8; PAGE_SIZE]>;

#[derive(Clone, Debug, Default)]
pub struct Memory {
    pages: BTreeMap<u32, Page>,
}

#[inline]
fn split(addr: u32) -> (u32, usize) {
    (addr >> PAGE_BITS, (addr & PAGE_MASK) as usize)
}

impl Memory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn read_u8(&self, addr: u32) -> u8 {
        let (page, offset) = split(addr);
        self.pages.get(&page).map_or(0, |p| p[offset])
    }

    pub fn write_u8(&mut self, addr: u32, value: u8) {
        let (page, offset) = split(addr);
        match self.pages.get_mut(&page) {
            Some(p) => p[offset] = value,
            // Zero into an absent page is already the stored value.
            None if value == 0 => {}
            None => {
                let mut p: Page = Box::new([0; PAGE_SIZE]);
                p[offset] = value;
                self.pages.insert(page, p);
            }
        }
    }

    pub fn read_u16(&self, addr: u32) -> u16 {
        u16::from_le_bytes(self.read_array(addr))
    }

    pub fn write_u16(&mut self, addr: u32, value: u16) {
        self.write_bytes(addr, &value.to_le_bytes());
    }

    pub fn read_u32(&self, addr: u32) -> u32 {
        u32::from_le_bytes(self.read_array(addr))
    }

    pub fn write_u32(&mut self, addr: u32, value: u32) {
        self.write_bytes(addr, &value.to_le_bytes());
    }

    fn read_array<const N: usize>(&self, addr: u32) -> [u8; N] {
        let mut out = [0; N];
        let (page, offset) = split(addr);
        if offset + N <= PAGE_SIZE {
            if let Some(p) = self.pages.get(&page) {
                out.copy_from_slice(&p[offset..offset + N]);
            }
        } else {
            for (k, b) in out.iter_mut().enumerate() {
                *b = self.read_u8(addr.wrapping_add(k as u32));
            }
        }
        out
    }

    /// Writes `bytes` at consecutive wrapping addresses starting at `addr`.
    pub fn write_bytes(&mut self, addr: u32, bytes: &[u8]) {
        for (k, &b) in bytes.iter().enumerate() {
            self.write_u8(addr.wrapping_add(k as u32), b);
        }
    }

    /// Reads `len` bytes starting at `addr`, wrapping at the top of memory.
    pub fn read_bytes(&self, addr: u32, len: usize) -> Vec<u8> {
        (0..len).map(|k| self.read_u8(addr.wrapping_add(k as u32))).collect()
    }

    /// Base addresses and contents of pages holding at least one non-zero byte,
    /// in ascending address order.
    pub fn nonzero_pages(&self) -> impl Iterator<Item = (u32, &[u8; PAGE_SIZE])> + '_ {
        self.pages.iter().filter(|(_, p)| p.iter().any(|&b| b != 0)).map(|(&n, p)| (n << PAGE_BITS, &**p))
    }

    /// Drops pages that contain only zeros.
    pub fn canonicalize(&mut self) {
        self.pages.retain(|_, p| p.iter().any(|&b| b != 0));
    }

    pub fn allocated_pages(&self) -> usize {
        self.pages.len()
    }

    /// Representation invariant: every page key lies inside the 2^32 space.
    /// Page size and byte width are enforced by the types.
    pub fn is_well_formed(&self) -> bool {
        self.pages.keys().next_back().is_none_or(|&k| k < PAGE_COUNT)
    }
}

impl PartialEq for Memory {
    fn eq(&self, other: &Self) -> bool {
        const ZERO: [u8; PAGE_SIZE] = [0; PAGE_SIZE];
        self.pages.keys().chain(other.pages.keys()).all(|k| {
            let a = self.pages.get(k).map_or(&ZERO, |p| &**p);
            let b = other.pages.get(k).map_or(&ZERO, |p| &**p);
            a == b
        })
    }
}

impl Eq for Memory {}
