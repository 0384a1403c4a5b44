#pragma once

#include <cstddef>
#include <new>
#include <vector>

#include <fftw3.h>

namespace lcflow {

/// Allocator returning FFTW's SIMD-aligned memory, so any buffer can be
/// handed to a cached plan through the new-array execute interface.
template <class T>
struct FftwAllocator {
    using value_type = T;

    FftwAllocator() noexcept = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) noexcept
    {
    }

    T* allocate(std::size_t count)
    {
        if (count == 0) return nullptr;
        void* p = fftw_malloc(count * sizeof(T));
        if (p == nullptr) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }

    template <class U>
    bool operator==(const FftwAllocator<U>&) const noexcept
    {
        return true;
    }
};

template <class T>
using AlignedVector = std::vector<T, FftwAllocator<T>>;

}  // namespace lcflow
