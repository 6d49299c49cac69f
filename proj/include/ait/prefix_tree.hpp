#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "ait/bitstring.hpp"
#include "ait/dyadic.hpp"
#include "ait/errors.hpp"

namespace ait {

// Binary tree of codeword addresses with the "allocate, then cut the
// descendant branches" discipline.  Only paths leading to allocated nodes are
// materialized; every other subtree is implicitly free.  Each materialized
// node caches the smallest depth at which its subtree still holds a free node,
// so the lexicographically first free node at any depth is one descent away.
//
// Single writer; copying the tree copies the whole state.
class PrefixTree {
public:
    PrefixTree() { nodes_.push_back(Node{}); }

    // Lexicographically least node at `depth` with no allocated ancestor, not
    // allocated itself and no allocated descendant.  Marks it allocated.
    BitString allocate_first_available(std::uint32_t depth) {
        if (min_free(0, 0) > depth)
            throw CapacityError("prefix tree exhausted at depth " + std::to_string(depth));

        BitString address;
        std::int32_t v = 0;
        std::uint32_t d = 0;
        while (true) {
            const Node& n = nodes_[static_cast<std::size_t>(v)];
            if (n.child[0] < 0 && n.child[1] < 0) break;  // untouched subtree
            int c = child_min_free(v, d, 0) <= depth ? 0 : 1;
            address.push_back(c == 1);
            ++d;
            std::int32_t next = nodes_[static_cast<std::size_t>(v)].child[c];
            if (next < 0) break;  // unmaterialized child: fully free
            v = next;
        }
        while (address.size() < depth) address.push_back(false);
        mark(address);
        return address;
    }

    // Allocates a specific node; fails if it conflicts with the current set.
    void allocate(const BitString& address) {
        if (!is_available(address))
            throw CapacityError("node " + address.literal() + " is not available");
        mark(address);
    }

    bool is_available(const BitString& address) const {
        std::int32_t v = 0;
        for (std::size_t i = 0; i < address.size(); ++i) {
            const Node& n = nodes_[static_cast<std::size_t>(v)];
            if (n.allocated) return false;
            std::int32_t next = n.child[address[i] ? 1 : 0];
            if (next < 0) return true;
            v = next;
        }
        const Node& n = nodes_[static_cast<std::size_t>(v)];
        return !n.allocated && n.child[0] < 0 && n.child[1] < 0;
    }

    // Allocated addresses in dictionary order.
    std::vector<BitString> allocated() const {
        std::vector<BitString> out;
        BitString prefix;
        collect(0, prefix, out);
        return out;
    }

    std::size_t allocated_count() const noexcept { return count_; }

    // Sum over allocated nodes of 2^-depth, exact.
    const DyadicRational& mass() const noexcept { return mass_; }

private:
    static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

    struct Node {
        std::int32_t child[2] = {-1, -1};
        std::uint32_t min_free = 0;  // valid only for materialized interior nodes
        bool allocated = false;
    };

    std::uint32_t min_free(std::int32_t v, std::uint32_t depth) const {
        const Node& n = nodes_[static_cast<std::size_t>(v)];
        if (n.allocated) return kNone;
        if (n.child[0] < 0 && n.child[1] < 0) return depth;
        return n.min_free;
    }

    std::uint32_t child_min_free(std::int32_t v, std::uint32_t depth, int c) const {
        std::int32_t ch = nodes_[static_cast<std::size_t>(v)].child[c];
        return ch < 0 ? depth + 1 : min_free(ch, depth + 1);
    }

    void mark(const BitString& address) {
        std::vector<std::int32_t> path{0};
        std::int32_t v = 0;
        for (std::size_t i = 0; i < address.size(); ++i) {
            int c = address[i] ? 1 : 0;
            if (nodes_[static_cast<std::size_t>(v)].child[c] < 0) {
                nodes_.push_back(Node{});
                nodes_[static_cast<std::size_t>(v)].child[c] = static_cast<std::int32_t>(nodes_.size() - 1);
            }
            v = nodes_[static_cast<std::size_t>(v)].child[c];
            path.push_back(v);
        }
        nodes_[static_cast<std::size_t>(v)].allocated = true;
        for (std::size_t i = path.size(); i-- > 0;) {
            std::int32_t u = path[i];
            Node& n = nodes_[static_cast<std::size_t>(u)];
            if (n.allocated) continue;
            auto depth = static_cast<std::uint32_t>(i);
            n.min_free = std::min(child_min_free(u, depth, 0), child_min_free(u, depth, 1));
        }
        mass_ += DyadicRational::pow2_neg(static_cast<std::uint32_t>(address.size()));
        ++count_;
    }

    void collect(std::int32_t v, BitString& prefix, std::vector<BitString>& out) const {
        const Node& n = nodes_[static_cast<std::size_t>(v)];
        if (n.allocated) {
            out.push_back(prefix);
            return;
        }
        for (int c = 0; c < 2; ++c) {
            if (n.child[c] < 0) continue;
            prefix.push_back(c == 1);
            collect(n.child[c], prefix, out);
            prefix.pop_back();
        }
    }

    std::vector<Node> nodes_;
    DyadicRational mass_;
    std::size_t count_ = 0;
};

}  // namespace ait
