#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "lasso/alphabet.hpp"

namespace lasso {

/// Membership predicate "u·v^ω ∈ φ" over a fixed alphabet. Copies share the
/// underlying callable; implementations must be pure.
class MembershipOracle {
public:
    MembershipOracle(Alphabet alphabet, std::function<bool(const Lasso&)> fn)
        : alphabet_(std::move(alphabet)), fn_(std::move(fn)) {}

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    bool operator()(const Lasso& w) const { return fn_(w); }

private:
    Alphabet alphabet_;
    std::function<bool(const Lasso&)> fn_;
};

/// Wraps an oracle with a cache keyed by the canonical lasso form. The cache
/// is internally synchronized, so the result may be called concurrently if
/// the wrapped oracle may.
inline MembershipOracle memoized(MembershipOracle inner) {
    struct Cache {
        std::mutex mu;
        std::map<std::pair<Word, Word>, bool> values;
    };
    auto cache = std::make_shared<Cache>();
    Alphabet alphabet = inner.alphabet();
    return MembershipOracle(std::move(alphabet), [cache, inner = std::move(inner)](const Lasso& w) {
        auto key = canonical_lasso(w.stem, w.loop);
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            auto it = cache->values.find(key);
            if (it != cache->values.end()) return it->second;
        }
        const bool v = inner(w);
        std::lock_guard<std::mutex> lock(cache->mu);
        cache->values.emplace(std::move(key), v);
        return v;
    });
}

} // namespace lasso
