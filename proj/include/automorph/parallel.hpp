#pragma once

#include <cstddef>
#include <functional>

namespace automorph {

/* 0 restores the default: AUTOMORPH_THREADS, else hardware concurrency */
void set_parallelism(int threads);
int parallelism();

/* runs f(i) for i in [0, n); callers write to slot i so results stay ordered */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace automorph
