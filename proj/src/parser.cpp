#include "msql/parser.hpp"

#include <utility>

namespace msql {

namespace {

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::size_t start) : tokens_(tokens), pos_(start) {}

  std::size_t position() const { return pos_; }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  Statement parse_statement_body() {
    const Token& t = peek();
    if (t.is_keyword("CREATE")) {
      if (peek(1).is_keyword("VIEW")) return parse_create_view();
      return parse_create();
    }
    if (t.is_keyword("INIT")) return parse_init();
    if (t.is_keyword("SELECT") || t.is_keyword("JOIN") || t.is_keyword("OM") ||
        t.is_keyword("LEFT") || t.is_keyword("RIGHT")) {
      return parse_query();
    }
    if (t.is_keyword("INSERT")) return parse_insert();
    if (t.is_keyword("UPDATE")) return parse_update();
    if (t.is_keyword("DELETE")) return parse_delete();
    if (t.is_keyword("TRANSFER")) return parse_transfer();
    fail("a statement (CREATE, INIT, SELECT, JOIN, INSERT, UPDATE, DELETE or TRANSFER)");
  }

  void consume_terminator(bool required) {
    if (peek().is_punct(";")) {
      advance();
    } else if (required && peek().kind != TokenKind::End) {
      fail("';' between statements");
    }
  }

  bool at_end() const { return peek().kind == TokenKind::End; }

  void expect_end() {
    if (!at_end()) fail("end of input");
  }

 private:
  // -- token helpers --------------------------------------------------------

  // Recursive productions (values, patterns, filters, fragments, sources)
  // share one nesting budget so pathological inputs fail instead of
  // exhausting the stack.
  struct DepthGuard {
    explicit DepthGuard(Parser& parser) : parser_(parser) {
      if (++parser_.depth_ > kMaxNestingDepth) {
        const Token& t = parser_.peek();
        throw Error(ErrorCode::ParseError, t.pos(), "nesting deeper than 200 levels");
      }
    }
    ~DepthGuard() { --parser_.depth_; }
    Parser& parser_;
  };

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorCode::ParseError, t.pos(), "expected " + expected + ", found " + found);
  }

  const Token& advance() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  bool accept_punct(const std::string& p) {
    if (peek().is_punct(p)) {
      advance();
      return true;
    }
    return false;
  }

  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("'" + p + "'");
  }

  bool accept_keyword(const std::string& k) {
    if (peek().is_keyword(k)) {
      advance();
      return true;
    }
    return false;
  }

  void expect_keyword(const std::string& k) {
    if (!accept_keyword(k)) fail(k);
  }

  std::string expect_ident() {
    if (peek().kind != TokenKind::Ident) fail("an identifier");
    return advance().text;
  }

  /// A name position: identifiers, or keywords used as plain names
  /// (scheme names such as Relation, attribute names such as FROM).
  std::string expect_name() {
    if (peek().kind != TokenKind::Ident && peek().kind != TokenKind::Keyword) {
      fail("a name");
    }
    return advance().text;
  }

  // -- shared productions ---------------------------------------------------

  AttrPath parse_path() {
    AttrPath path;
    // Keyword-named graph schemes (Relation) may root a dotted path; the
    // following '.' keeps the grammar unambiguous.
    if (peek().kind == TokenKind::Keyword && peek(1).is_punct(".")) {
      path.segments.push_back(advance().text);
    } else {
      path.segments.push_back(expect_ident());
    }
    while (peek().is_punct(".")) {
      advance();
      path.segments.push_back(expect_name());
    }
    return path;
  }

  ObjectRef parse_object_ref() {
    ObjectRef ref;
    ref.segments.push_back(expect_ident());
    while (peek().is_punct(".")) {
      advance();
      ref.segments.push_back(expect_name());
    }
    return ref;
  }

  std::optional<CmpOp> peek_cmp_op() const {
    const Token& t = peek();
    if (t.is_punct("=")) return CmpOp::Eq;
    if (t.is_punct("<")) return CmpOp::Lt;
    if (t.is_punct(">")) return CmpOp::Gt;
    if (t.is_punct("<=")) return CmpOp::Le;
    if (t.is_punct(">=")) return CmpOp::Ge;
    if (t.is_keyword("IN")) return CmpOp::In;
    return std::nullopt;
  }

  CmpOp expect_cmp_op() {
    auto op = peek_cmp_op();
    if (!op) fail("a comparison operator");
    advance();
    return *op;
  }

  Value parse_value() {
    DepthGuard guard(*this);
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::IntLit:
        advance();
        return Value::integer(t.int_value);
      case TokenKind::StrLit:
        advance();
        return Value::str(t.str_value);
      case TokenKind::Keyword:
        if (t.keyword == "TRUE") {
          advance();
          return Value::boolean(true);
        }
        if (t.keyword == "FALSE") {
          advance();
          return Value::boolean(false);
        }
        if (t.keyword == "NULL") {
          advance();
          return Value::null();
        }
        break;
      case TokenKind::Punct:
        if (t.text == "[") {
          advance();
          std::vector<Value> elems;
          if (!peek().is_punct("]")) {
            elems.push_back(parse_value());
            while (accept_punct(",")) elems.push_back(parse_value());
          }
          expect_punct("]");
          return Value::list(std::move(elems));
        }
        if (t.text == "{") {
          advance();
          std::vector<Value::MapEntry> entries;
          if (!peek().is_punct("}")) {
            do {
              std::string key = parse_map_key();
              expect_punct(":");
              Value v = parse_value();
              for (const auto& [k, unused] : entries) {
                if (k == key) fail("distinct map keys (duplicate '" + key + "')");
              }
              entries.emplace_back(std::move(key), std::move(v));
            } while (accept_punct(","));
          }
          expect_punct("}");
          return Value::map(std::move(entries));
        }
        break;
      default:
        break;
    }
    fail("a value");
  }

  std::string parse_map_key() {
    const Token& t = peek();
    if (t.kind == TokenKind::Ident || t.kind == TokenKind::Keyword) return advance().text;
    if (t.kind == TokenKind::StrLit) return advance().str_value;
    fail("a map key");
  }

  // -- schemes --------------------------------------------------------------

  TypeTag parse_type_tag() {
    if (accept_keyword("INT")) return TypeTag::of(TypeTag::Kind::Int);
    if (accept_keyword("STRING")) return TypeTag::of(TypeTag::Kind::String);
    if (accept_keyword("BOOL")) return TypeTag::of(TypeTag::Kind::Bool);
    if (accept_keyword("MAP")) return TypeTag::of(TypeTag::Kind::Map);
    if (accept_keyword("ANY")) return TypeTag::of(TypeTag::Kind::Any);
    if (accept_keyword("LIST")) {
      expect_keyword("OF");
      return TypeTag::list_of(parse_type_tag());
    }
    fail("a type (INT, STRING, BOOL, LIST OF ..., MAP, ANY)");
  }

  Constraint parse_constraint() {
    if (accept_keyword("PRIMARY")) return Constraint::primary();
    if (accept_keyword("NOT_NULL")) return Constraint::not_null();
    if (accept_keyword("FOREIGN")) {
      if (accept_punct("(")) {
        std::string object = expect_name();
        expect_punct(".");
        std::string attribute = expect_name();
        expect_punct(")");
        return Constraint::foreign(AttrTarget{std::move(object), std::move(attribute)});
      }
      return Constraint::foreign();
    }
    return Constraint::none();
  }

  Triple parse_triple() {
    expect_punct("(");
    Triple t;
    t.name = expect_name();
    expect_punct(",");
    t.type = parse_type_tag();
    if (accept_punct(",")) {
      t.constraint = parse_constraint();  // possibly empty: "(name, string,)"
    }
    expect_punct(")");
    return t;
  }

  NestedTriple parse_fragment() {
    DepthGuard guard(*this);
    if (peek().is_punct("(")) {
      return NestedTriple::make_leaf(parse_triple());
    }
    std::string name = expect_name();
    expect_punct(":");
    return parse_named_fragment_body(std::move(name));
  }

  NestedTriple parse_named_fragment_body(std::string name) {
    if (peek().is_keyword("LIST")) {
      advance();
      expect_keyword("OF");
      return NestedTriple::make_list(std::move(name), parse_list_element());
    }
    expect_punct("{");
    std::vector<NestedTriple> children = parse_fragment_list();
    expect_punct("}");
    return NestedTriple::make_map(std::move(name), std::move(children));
  }

  NestedTriple parse_list_element() {
    if (peek().is_punct("(")) {
      return NestedTriple::make_leaf(parse_triple());
    }
    if (peek().is_keyword("LIST")) {
      advance();
      expect_keyword("OF");
      return NestedTriple::make_list("", parse_list_element());
    }
    expect_punct("{");
    std::vector<NestedTriple> children = parse_fragment_list();
    expect_punct("}");
    return NestedTriple::make_map("", std::move(children));
  }

  std::vector<NestedTriple> parse_fragment_list() {
    std::vector<NestedTriple> out;
    out.push_back(parse_fragment());
    while (accept_punct(",")) out.push_back(parse_fragment());
    return out;
  }

  ObjectScheme parse_scheme(ModelType model) {
    switch (model) {
      case ModelType::Relation: {
        RelationalScheme rel;
        rel.columns.push_back(parse_triple());
        while (accept_punct(",")) rel.columns.push_back(parse_triple());
        return rel;
      }
      case ModelType::KeyValue: {
        expect_punct("{");
        KeyValueScheme kv;
        kv.key = parse_triple();
        expect_punct(",");
        kv.value = parse_triple();
        expect_punct("}");
        return kv;
      }
      case ModelType::Document: {
        DocumentScheme doc;
        if (accept_punct("{")) {
          doc.root = parse_fragment_list();
          expect_punct("}");
        } else {
          doc.root = parse_fragment_list();
        }
        return doc;
      }
      case ModelType::Graph: {
        GraphScheme graph;
        do {
          if (accept_keyword("NODE")) {
            NodeScheme node;
            node.name = expect_name();
            expect_punct("{");
            node.properties = parse_fragment_list();
            expect_punct("}");
            graph.nodes.push_back(std::move(node));
          } else if (accept_keyword("EDGE")) {
            EdgeScheme edge;
            edge.name = expect_name();
            expect_punct("{");
            expect_keyword("FROM");
            expect_punct(":");
            edge.from_scheme = expect_name();
            expect_punct(",");
            expect_keyword("TO");
            expect_punct(":");
            edge.to_scheme = expect_name();
            if (accept_punct(",")) {
              edge.properties = parse_fragment_list();
            }
            expect_punct("}");
            graph.edges.push_back(std::move(edge));
          } else {
            fail("NODE or EDGE");
          }
        } while (accept_punct(","));
        return graph;
      }
    }
    fail("a scheme");
  }

  ModelType expect_model_type() {
    if (accept_keyword("RELATION")) return ModelType::Relation;
    if (accept_keyword("KV")) return ModelType::KeyValue;
    if (accept_keyword("DOCUMENT")) return ModelType::Document;
    if (accept_keyword("GRAPH")) return ModelType::Graph;
    fail("a model type (DOCUMENT, GRAPH, RELATION or KV)");
  }

  // -- DDL ------------------------------------------------------------------

  Statement parse_create() {
    expect_keyword("CREATE");
    CreateObject stmt;
    stmt.type = expect_model_type();
    stmt.name = expect_ident();
    return stmt;
  }

  Statement parse_init() {
    expect_keyword("INIT");
    InitObject stmt;
    stmt.type = expect_model_type();
    stmt.name = expect_ident();
    expect_keyword("WITH");
    stmt.scheme = parse_scheme(stmt.type);
    return stmt;
  }

  Statement parse_create_view() {
    expect_keyword("CREATE");
    expect_keyword("VIEW");
    CreateView stmt;
    if (accept_keyword("MULTI")) {
      stmt.vtype = ViewType::Multi;
    } else if (accept_keyword("SINGLE")) {
      stmt.vtype = ViewType::Single;
    } else {
      fail("MULTI or SINGLE");
    }
    stmt.name = expect_ident();
    expect_keyword("AS");
    stmt.query = Box<QueryStmt>(parse_query_body());
    return stmt;
  }

  // -- match patterns and paths ---------------------------------------------

  MatchPattern parse_pattern() {
    DepthGuard guard(*this);
    expect_punct("{");
    MatchPattern pattern;
    if (!peek().is_punct("}")) {
      do {
        std::string attr = expect_name();
        MatchEntry entry;
        if (accept_punct(":=")) {
          // Legacy alias: attr:={, value} means attr:{=, value}.
          expect_punct("{");
          expect_punct(",");
          entry.kind = MatchEntry::Kind::Pred;
          entry.pred = MatchPred{CmpOp::Eq, parse_value()};
          expect_punct("}");
        } else {
          expect_punct(":");
          entry = parse_pattern_entry_body();
        }
        for (const auto& [k, unused] : pattern.entries) {
          if (k == attr) fail("distinct pattern attributes (duplicate '" + attr + "')");
        }
        pattern.entries.emplace_back(std::move(attr), std::move(entry));
      } while (accept_punct(","));
    }
    expect_punct("}");
    return pattern;
  }

  MatchEntry parse_pattern_entry_body() {
    MatchEntry entry;
    if (peek().is_keyword("LIST")) {
      advance();
      entry.kind = MatchEntry::Kind::List;
      if (accept_punct("<")) {
        entry.pattern = Box<MatchPattern>(parse_pattern());
        expect_punct(">");
      } else {
        expect_keyword("OF");
        entry.pattern = Box<MatchPattern>(parse_pattern());
      }
      return entry;
    }
    // '{' then: an operator starts a predicate, otherwise a sub-pattern.
    if (!peek().is_punct("{")) fail("'{' or LIST");
    if (auto op = [&]() -> std::optional<CmpOp> {
          const Token& t = peek(1);
          if (t.is_punct("=")) return CmpOp::Eq;
          if (t.is_punct("<")) return CmpOp::Lt;
          if (t.is_punct(">")) return CmpOp::Gt;
          if (t.is_punct("<=")) return CmpOp::Le;
          if (t.is_punct(">=")) return CmpOp::Ge;
          if (t.is_keyword("IN") && peek(2).is_punct(",")) return CmpOp::In;
          return std::nullopt;
        }()) {
      advance();  // {
      advance();  // op
      expect_punct(",");
      entry.kind = MatchEntry::Kind::Pred;
      entry.pred = MatchPred{*op, parse_value()};
      expect_punct("}");
      return entry;
    }
    entry.kind = MatchEntry::Kind::Sub;
    entry.pattern = Box<MatchPattern>(parse_pattern());
    return entry;
  }

  std::vector<PathStep> parse_path_steps() { return continue_path_steps(parse_node_step()); }

  PathStep parse_node_step() { return parse_step(false); }

  PathStep parse_step(bool is_edge) {
    PathStep step;
    step.is_edge = is_edge;
    step.scheme_name = expect_name();
    accept_punct(":");
    step.pattern = parse_pattern();
    return step;
  }

  // -- filters ----------------------------------------------------------------

  FilterExpr parse_where_clause() {
    if (!accept_keyword("WHERE")) return FilterExpr{};
    return parse_or_filter();
  }

  FilterExpr parse_or_filter() {
    DepthGuard guard(*this);
    FilterExpr first = parse_and_filter();
    if (!peek().is_keyword("OR")) return first;
    LogicalFilter node;
    node.op = LogicalOp::Or;
    node.children.push_back(std::move(first));
    while (accept_keyword("OR")) node.children.push_back(parse_and_filter());
    return FilterExpr{std::move(node)};
  }

  FilterExpr parse_and_filter() {
    FilterExpr first = parse_xor_filter();
    if (!peek().is_keyword("AND")) return first;
    LogicalFilter node;
    node.op = LogicalOp::And;
    node.children.push_back(std::move(first));
    while (accept_keyword("AND")) node.children.push_back(parse_xor_filter());
    return FilterExpr{std::move(node)};
  }

  FilterExpr parse_xor_filter() {
    FilterExpr first = parse_not_filter();
    if (!peek().is_keyword("XOR")) return first;
    LogicalFilter node;
    node.op = LogicalOp::Xor;
    node.children.push_back(std::move(first));
    while (accept_keyword("XOR")) node.children.push_back(parse_not_filter());
    return FilterExpr{std::move(node)};
  }

  FilterExpr parse_not_filter() {
    if (accept_keyword("NOT")) {
      LogicalFilter node;
      node.op = LogicalOp::Not;
      node.children.push_back(parse_not_filter());
      return FilterExpr{std::move(node)};
    }
    return parse_primary_filter();
  }

  FilterExpr parse_primary_filter() {
    const Token& t = peek();
    if (t.is_punct("(")) {
      advance();
      FilterExpr inner = parse_or_filter();
      expect_punct(")");
      return inner;
    }
    if (t.is_keyword("NULL")) {
      advance();
      return FilterExpr{};
    }
    if (t.is_keyword("MATCH")) {
      advance();
      MatchFilter match;
      match.object = parse_path();
      accept_punct(":");
      match.pattern = parse_pattern();
      return FilterExpr{std::move(match)};
    }
    if (t.is_keyword("PATH")) {
      advance();
      PathFilter path;
      path.steps = parse_path_steps();
      return FilterExpr{std::move(path)};
    }
    if (t.kind == TokenKind::Ident && peek(1).is_punct("(")) {
      return parse_call_filter();
    }
    if (t.kind == TokenKind::Ident ||
        (t.kind == TokenKind::Keyword && peek(1).is_punct("."))) {
      AttrPath path = parse_path();
      if (peek().is_punct(":")) {
        advance();
        MatchPattern pattern = parse_pattern();
        if (peek().kind == TokenKind::ArrowRight || peek().kind == TokenKind::ArrowLeft) {
          // Bare path form: Node:{...} -> Edge:{...} -> ...
          if (path.segments.size() != 1) {
            throw Error(ErrorCode::ParseError, t.pos(),
                        "path steps name node/edge schemes, not dotted paths");
          }
          PathFilter filter;
          PathStep first;
          first.is_edge = false;
          first.scheme_name = path.segments[0];
          first.pattern = std::move(pattern);
          filter.steps = continue_path_steps(std::move(first));
          return FilterExpr{std::move(filter)};
        }
        MatchFilter match;
        match.object = std::move(path);
        match.pattern = std::move(pattern);
        return FilterExpr{std::move(match)};
      }
      CmpFilter cmp;
      cmp.lhs = std::move(path);
      cmp.op = expect_cmp_op();
      if (cmp.op == CmpOp::In) {
        cmp.rhs = parse_value();  // literal list
      } else if (peek().kind == TokenKind::Ident) {
        cmp.rhs = parse_path();
      } else {
        cmp.rhs = parse_value();
      }
      return FilterExpr{std::move(cmp)};
    }
    fail("a filter");
  }

  /// Parses the arrow-separated remainder of a path, the first node step
  /// already in hand. The two arrows around an edge must agree and give it
  /// its direction.
  std::vector<PathStep> continue_path_steps(PathStep first) {
    std::vector<PathStep> steps;
    steps.push_back(std::move(first));
    while (peek().kind == TokenKind::ArrowRight || peek().kind == TokenKind::ArrowLeft) {
      PathDirection dir =
          advance().kind == TokenKind::ArrowRight ? PathDirection::Forward : PathDirection::Backward;
      PathStep edge = parse_step(true);
      edge.direction = dir;
      const Token& closing = peek();
      if (closing.kind != TokenKind::ArrowRight && closing.kind != TokenKind::ArrowLeft) {
        fail("a matching arrow after the edge step");
      }
      PathDirection dir2 = advance().kind == TokenKind::ArrowRight ? PathDirection::Forward
                                                                   : PathDirection::Backward;
      if (dir2 != dir) {
        throw Error(ErrorCode::ParseError, closing.pos(),
                    "arrows around an edge step must point the same way");
      }
      steps.push_back(std::move(edge));
      steps.push_back(parse_node_step());
    }
    return steps;
  }

  FilterExpr parse_call_filter() {
    CallFilter call;
    call.name = expect_ident();
    expect_punct("(");
    call.object = parse_path();
    while (accept_punct(",")) call.args.push_back(parse_value());
    expect_punct(")");
    return FilterExpr{std::move(call)};
  }

  // -- result schemes ---------------------------------------------------------

  NestedAttribution parse_attribution() {
    DepthGuard guard(*this);
    if (peek().is_punct("{")) {
      // Anonymous document shape nested directly in a list element position.
      advance();
      std::vector<NestedAttribution> children = parse_attribution_children();
      expect_punct("}");
      return NestedAttribution::map_out("", std::move(children));
    }
    AttrPath path = parse_path();
    if (accept_punct(":")) {
      std::string name = path.segments.back();
      if (accept_punct("{")) {
        std::vector<NestedAttribution> children = parse_attribution_children();
        expect_punct("}");
        return NestedAttribution::map_out(std::move(name), std::move(children));
      }
      expect_punct("[");
      std::vector<NestedAttribution> children = parse_attribution_children();
      expect_punct("]");
      return NestedAttribution::list_out(std::move(name), std::move(children));
    }
    return NestedAttribution::attr(std::move(path));
  }

  std::vector<NestedAttribution> parse_attribution_children() {
    std::vector<NestedAttribution> out;
    out.push_back(parse_attribution());
    while (accept_punct(",")) out.push_back(parse_attribution());
    return out;
  }

  AttributionList parse_attribution_list() {
    AttributionList list;
    if (peek().is_punct("{")) {
      list.braced = true;
      advance();
      list.attrs = parse_attribution_children();
      expect_punct("}");
      return list;
    }
    list.attrs.push_back(parse_attribution());
    while (true) {
      std::size_t mark = pos_;
      if (!accept_punct(",")) break;
      // A comma may belong to an enclosing join operand list; only treat it
      // as an attribution separator when an attribution actually follows.
      if (!try_parse([&] { list.attrs.push_back(parse_attribution()); })) {
        pos_ = mark;
        break;
      }
    }
    return list;
  }

  // -- queries ----------------------------------------------------------------

  QueryStmt parse_query_body() {
    QueryStmt q;
    if (peek().is_keyword("SELECT")) {
      q.node = parse_select();
    } else {
      q.node = parse_join_source();
    }
    return q;
  }

  Statement parse_query() { return parse_query_body(); }

  SelectStmt parse_select() {
    expect_keyword("SELECT");
    SelectStmt stmt;
    stmt.distinct = accept_keyword("DISTINCT");
    stmt.outputs.push_back(parse_attribution_list());
    while (accept_punct("&")) stmt.outputs.push_back(parse_attribution_list());
    if (accept_keyword("FROM")) {
      stmt.has_from = true;
      stmt.from.push_back(parse_source());
      while (true) {
        std::size_t mark = pos_;
        if (!accept_punct(",")) break;
        if (!try_parse([&] { stmt.from.push_back(parse_source()); })) {
          pos_ = mark;
          break;
        }
      }
    }
    stmt.where = parse_where_clause();
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      stmt.order.push_back(parse_order_key());
      while (true) {
        std::size_t mark = pos_;
        if (!accept_punct(",")) break;
        if (!try_parse([&] { stmt.order.push_back(parse_order_key()); })) {
          pos_ = mark;
          break;
        }
      }
    }
    return stmt;
  }

  OrderKey parse_order_key() {
    OrderKey key;
    key.path = parse_path();
    if (accept_keyword("DESC")) {
      key.ascending = false;
    } else {
      accept_keyword("ASC");
    }
    return key;
  }

  Source parse_source() {
    DepthGuard guard(*this);
    Source src;
    const Token& t = peek();
    if (t.is_punct("(")) {
      advance();
      src = parse_source();
      expect_punct(")");
      return src;
    }
    if (t.is_keyword("JOIN") || t.is_keyword("OM") || t.is_keyword("LEFT") ||
        t.is_keyword("RIGHT")) {
      src.node = parse_join_source();
      return src;
    }
    if (t.is_keyword("SELECT")) {
      src.node = Box<SelectStmt>(parse_select());
      return src;
    }
    src.node = parse_object_ref();
    return src;
  }

  JoinSource parse_join_source() {
    JoinSource join;
    if (accept_keyword("OM")) {
      expect_keyword("JOIN");
      join.kind = JoinKind::OneToMany;
    } else if (accept_keyword("LEFT")) {
      expect_keyword("JOIN");
      join.kind = JoinKind::Left;
    } else if (accept_keyword("RIGHT")) {
      expect_keyword("JOIN");
      join.kind = JoinKind::Right;
    } else {
      expect_keyword("JOIN");
      join.kind = JoinKind::OneToOne;
    }
    join.left = Box<Source>(parse_source());
    expect_punct(",");
    join.right = Box<Source>(parse_source());
    expect_keyword("RULE");
    join.rule = parse_attribution_list();
    expect_keyword("WITH");
    join.with.push_back(parse_with_cond());
    while (true) {
      std::size_t mark = pos_;
      bool comma = accept_punct(",");
      bool keyword_and = !comma && accept_keyword("AND");
      if (!comma && !keyword_and) break;
      if (!try_parse([&] { join.with.push_back(parse_with_cond()); })) {
        pos_ = mark;
        break;
      }
    }
    return join;
  }

  WithCond parse_with_cond() {
    WithCond cond;
    cond.lhs = parse_path();
    cond.op = expect_cmp_op();
    if (cond.op == CmpOp::In) fail("a join condition operator (=, <, >, <=, >=)");
    cond.rhs = parse_path();
    return cond;
  }

  // -- DML --------------------------------------------------------------------

  Statement parse_insert() {
    expect_keyword("INSERT");
    InsertStmt stmt;
    stmt.target = parse_object_ref();
    if (accept_keyword("MULTIVAL")) {
      stmt.items.push_back(parse_insert_item());
      while (accept_punct(",")) stmt.items.push_back(parse_insert_item());
      return stmt;
    }
    expect_keyword("QUERY");
    stmt.query = Box<QueryStmt>(parse_query_body());
    return stmt;
  }

  InsertItem parse_insert_item() {
    InsertItem item;
    if (accept_punct("(")) {
      item.tuple = true;
      std::vector<Value> fields;
      fields.push_back(parse_value());
      while (accept_punct(",")) fields.push_back(parse_value());
      expect_punct(")");
      item.value = Value::list(std::move(fields));
      return item;
    }
    item.value = parse_value();
    return item;
  }

  Statement parse_update() {
    expect_keyword("UPDATE");
    UpdateStmt stmt;
    stmt.target = parse_object_ref();
    expect_keyword("SET");
    stmt.sets.push_back(parse_assignment());
    while (accept_punct(",")) stmt.sets.push_back(parse_assignment());
    stmt.where = parse_where_clause();
    return stmt;
  }

  Assignment parse_assignment() {
    Assignment a;
    a.path = parse_path();
    if (!accept_punct(":=")) expect_punct("=");
    a.value = parse_value();
    return a;
  }

  Statement parse_delete() {
    expect_keyword("DELETE");
    DeleteStmt stmt;
    stmt.target = parse_object_ref();
    stmt.where = parse_where_clause();
    return stmt;
  }

  Statement parse_transfer() {
    expect_keyword("TRANSFER");
    TransferStmt stmt;
    const Token& t = peek();
    if (t.is_keyword("SELECT") || t.is_keyword("JOIN") || t.is_keyword("OM") ||
        t.is_keyword("LEFT") || t.is_keyword("RIGHT")) {
      stmt.source_query = Box<QueryStmt>(parse_query_body());
    } else {
      stmt.source_object = parse_object_ref();
    }
    expect_keyword("INTO");
    stmt.target = expect_ident();
    expect_keyword("WITH");
    stmt.co_relation.push_back(parse_co_pair());
    while (accept_punct(",")) stmt.co_relation.push_back(parse_co_pair());
    return stmt;
  }

  CoRelPair parse_co_pair() {
    CoRelPair pair;
    pair.source = parse_path();
    expect_punct(":");
    pair.target = parse_path();
    return pair;
  }

  // -- backtracking helper ------------------------------------------------------

  template <typename Fn>
  bool try_parse(Fn&& fn) {
    std::size_t mark = pos_;
    try {
      fn();
      return true;
    } catch (const Error&) {
      pos_ = mark;
      return false;
    }
  }

  static constexpr int kMaxNestingDepth = 200;

  const std::vector<Token>& tokens_;
  std::size_t pos_;
  int depth_ = 0;
};

}  // namespace

Statement parse_statement(const std::string& text) {
  std::vector<Token> tokens = tokenize(text);
  Parser parser(tokens, 0);
  Statement stmt = parser.parse_statement_body();
  parser.consume_terminator(false);
  parser.expect_end();
  return stmt;
}

std::vector<Statement> parse_script(const std::string& text) {
  std::vector<Token> tokens = tokenize(text);
  Parser parser(tokens, 0);
  std::vector<Statement> out;
  while (!parser.at_end()) {
    out.push_back(parser.parse_statement_body());
    parser.consume_terminator(true);
  }
  return out;
}

ScriptReader::ScriptReader(const std::string& text) : tokens_(tokenize(text)) {}

bool ScriptReader::at_end() const {
  return pos_ >= tokens_.size() || tokens_[pos_].kind == TokenKind::End;
}

SourcePos ScriptReader::next_pos() const {
  if (pos_ < tokens_.size()) return tokens_[pos_].pos();
  return {};
}

Statement ScriptReader::next() {
  Parser parser(tokens_, pos_);
  Statement stmt = parser.parse_statement_body();
  parser.consume_terminator(true);
  pos_ = parser.position();
  return stmt;
}

void ScriptReader::resync() {
  while (pos_ < tokens_.size() && tokens_[pos_].kind != TokenKind::End) {
    bool semi = tokens_[pos_].is_punct(";");
    ++pos_;
    if (semi) return;
  }
}

}  // namespace msql
