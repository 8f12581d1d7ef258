#ifndef SYMDYN_SRC_PALINDROME_TREE_HPP
#define SYMDYN_SRC_PALINDROME_TREE_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "symdyn/words.hpp"

namespace symdyn::detail {

// Eertree over a symbol sequence. Node 0 is the imaginary root (length -1),
// node 1 the empty palindrome; every other node is a distinct nonempty
// palindromic factor, created at the first position where it ends.
class PalindromeTree {
public:
    explicit PalindromeTree(std::span<const Symbol> s) : s_(s) {
        nodes_.push_back({-1, 0, 0, {}});
        nodes_.push_back({0, 0, 0, {}});
        suffix_node_.reserve(s.size());
        created_.reserve(s.size());
        int last = 1;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const Symbol c = s[i];
            int cur = last;
            while (!extends(cur, i)) cur = nodes_[cur].link;
            if (int child = find(cur, c); child >= 0) {
                last = child;
                created_.push_back(false);
            } else {
                Node node{nodes_[cur].len + 2, 1, i, {}};
                if (node.len > 1) {
                    int x = nodes_[cur].link;
                    while (!extends(x, i)) x = nodes_[x].link;
                    node.link = find(x, c);
                }
                nodes_.push_back(std::move(node));
                const int id = static_cast<int>(nodes_.size()) - 1;
                nodes_[cur].next.emplace_back(c, id);
                last = id;
                created_.push_back(true);
            }
            suffix_node_.push_back(last);
        }
    }

    /// Distinct nonempty palindromic factors.
    std::size_t distinct() const noexcept { return nodes_.size() - 2; }

    /// (length, end position of first occurrence) of every nonempty palindrome
    /// in creation order.
    std::vector<std::pair<std::size_t, std::size_t>> palindromes() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        out.reserve(distinct());
        for (std::size_t k = 2; k < nodes_.size(); ++k)
            out.emplace_back(static_cast<std::size_t>(nodes_[k].len), nodes_[k].first_end);
        return out;
    }

    /// Length of the longest palindromic suffix of s[0..i].
    std::size_t longest_suffix_palindrome(std::size_t i) const {
        return static_cast<std::size_t>(nodes_[suffix_node_[i]].len);
    }

    /// Whether appending s[i] created a new palindrome.
    bool created_at(std::size_t i) const { return created_[i]; }

private:
    struct Node {
        int len;
        int link;
        std::size_t first_end;
        std::vector<std::pair<Symbol, int>> next;
    };

    bool extends(int node, std::size_t i) const {
        const long j = static_cast<long>(i) - 1 - nodes_[node].len;
        return j >= 0 && s_[static_cast<std::size_t>(j)] == s_[i];
    }

    int find(int node, Symbol c) const {
        for (const auto& [sym, child] : nodes_[node].next)
            if (sym == c) return child;
        return -1;
    }

    std::span<const Symbol> s_;
    std::vector<Node> nodes_;
    std::vector<int> suffix_node_;
    std::vector<bool> created_;
};

}  // namespace symdyn::detail

#endif
