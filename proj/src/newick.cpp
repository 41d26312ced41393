#include "hybnet/newick.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_set>

#include "hybnet/errors.hpp"

namespace hybnet {
namespace detail {
namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  NewickNode parse() {
    skip();
    NewickNode root = subtree();
    skip();
    if (peek() == ':') branch_length();
    skip();
    if (peek() != ';') fail("expected ';'");
    ++pos_;
    skip();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    return root;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '[') {
        auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  static bool is_meta(char c) {
    return c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '[' || c == ']' ||
           c == '\'' || std::isspace(static_cast<unsigned char>(c));
  }

  std::string label() {
    skip();
    std::string out;
    if (peek() == '\'') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        char c = text_[pos_++];
        if (c == '\'') {
          if (peek() == '\'') {
            out += '\'';
            ++pos_;
            continue;
          }
          break;
        }
        out += c;
      }
      return out;
    }
    // Underscores are kept literally rather than read as blanks.
    while (pos_ < text_.size() && !is_meta(text_[pos_])) out += text_[pos_++];
    return out;
  }

  void branch_length() {
    ++pos_;  // ':'
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_meta(text_[pos_])) ++pos_;
    if (start == pos_) fail("empty branch length");
  }

  NewickNode subtree() {
    skip();
    NewickNode node;
    if (peek() == '(') {
      ++pos_;
      while (true) {
        node.children.push_back(subtree());
        skip();
        if (peek() == ':') branch_length();
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
      node.label = label();
    } else {
      node.label = label();
      if (node.label.empty()) fail("empty leaf label");
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

NewickNode parse_newick_syntax(std::string_view text) { return Reader(text).parse(); }

}  // namespace detail

PhyloTree parse_newick(std::string_view text) {
  detail::NewickNode syntax = detail::parse_newick_syntax(text);
  std::vector<TreeNode> nodes;
  nodes.push_back(TreeNode{kNoNode, {}, kRho});
  std::unordered_set<std::string> seen;

  std::function<NodeId(const detail::NewickNode&)> build =
      [&](const detail::NewickNode& s) -> NodeId {
    if (s.children.empty()) {
      if (s.label == kRho) throw InputError("label " + kRho + " is reserved for the root");
      if (s.label.rfind("__", 0) == 0)
        throw InputError("labels starting with '__' are reserved: " + s.label);
      if (!seen.insert(s.label).second) throw DuplicateLabel(s.label);
      nodes.push_back(TreeNode{kNoNode, {}, s.label});
      return static_cast<NodeId>(nodes.size()) - 1;
    }
    if (s.children.size() > 2)
      throw NonBinaryError("Newick node with " + std::to_string(s.children.size()) + " children");
    if (s.children.size() == 1) return build(s.children[0]);
    NodeId a = build(s.children[0]);
    NodeId b = build(s.children[1]);
    nodes.push_back(TreeNode{kNoNode, {a, b}, {}});
    NodeId id = static_cast<NodeId>(nodes.size()) - 1;
    nodes[a].parent = id;
    nodes[b].parent = id;
    return id;
  };

  NodeId top = build(syntax);
  nodes[0].children.push_back(top);
  nodes[top].parent = 0;
  return PhyloTree(std::move(nodes));
}

std::vector<PhyloTree> parse_newick_lines(std::string_view text) {
  std::vector<PhyloTree> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] != '#') out.push_back(parse_newick(line));
    start = end + 1;
  }
  return out;
}

std::string newick_label(std::string_view label) {
  bool needs_quotes = label.empty();
  for (char c : label) {
    if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '[' || c == ']' ||
        c == '\'' || c == '#' || std::isspace(static_cast<unsigned char>(c))) {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return std::string(label);
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

std::string to_newick(const PhyloTree& t) {
  if (t.empty()) return ";";
  std::function<std::string(NodeId)> encode = [&](NodeId v) -> std::string {
    if (t.is_leaf(v)) return newick_label(t.label(v));
    std::vector<std::string> parts;
    for (NodeId c : t.children(v)) parts.push_back(encode(c));
    if (parts.size() == 1) return parts[0];
    std::sort(parts.begin(), parts.end());
    return "(" + parts[0] + "," + parts[1] + ")";
  };
  NodeId top = t.root();
  if (t.has_rho()) {
    if (t.children(top).empty()) return ";";
    top = t.children(top)[0];
  }
  std::string body = encode(top);
  if (t.is_leaf(top)) body = "(" + body + ")";
  return body + ";";
}

}  // namespace hybnet
