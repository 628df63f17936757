#ifndef MDAG_JOINT_TABLE_HPP
#define MDAG_JOINT_TABLE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mdag {

/// A dense probability tensor over named discrete variables.  Values are laid
/// out row-major with the last variable varying fastest.  A table created by
/// the engine has non-negative entries and total mass one within 1e-12;
/// intermediate kernels reuse the type without the mass invariant.
class JointTable {
  public:
    JointTable() = default;
    JointTable(std::vector<std::string> variables, std::vector<int> cardinalities,
               std::vector<double> values);

    static JointTable constant(std::vector<std::string> variables, std::vector<int> cardinalities,
                               double value);

    const std::vector<std::string>& variables() const { return vars_; }
    const std::vector<int>& cardinalities() const { return cards_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    std::size_t cell_count() const { return values_.size(); }

    int index_of(const std::string& var) const;  // throws InvalidInput if unknown
    int card(int var_index) const { return cards_[var_index]; }

    /// Throws InvalidInput unless entries are non-negative and sum to one
    /// within `tol`.
    void check_probability(double tol = 1e-12) const;
    double total_mass() const;
    bool strictly_positive(double eps = 0.0) const;

    /// Flat offset of an assignment (one state per variable, in order).
    std::size_t offset(const std::vector<int>& states) const;
    /// Decodes a flat offset into an assignment.
    std::vector<int> assignment(std::size_t offset) const;

    /// Sums out the named variables.
    JointTable marginalize(const std::vector<std::string>& out_vars) const;
    /// Keeps exactly the named variables (complement of marginalize).
    JointTable margin_keeping(const std::vector<std::string>& kept) const;

    /// Pointwise binary ops over tables whose variables form compatible
    /// subsets of this table's variables (broadcast over missing dims).
    JointTable multiply(const JointTable& other) const;
    /// Division with a floor check: denominators at or below `eps` raise a
    /// Degenerate error.
    JointTable divide(const JointTable& other, double eps) const;

    /// Largest |a-b| over cells; tables must have identical shape.
    double max_abs_diff(const JointTable& other) const;

    /// Largest spread of values across assignments of `invariant_vars` when
    /// everything else is held fixed (zero iff the table does not depend on
    /// them).
    double invariance_gap(const std::vector<std::string>& invariant_vars) const;

    /// Text round-trip: header with variables and cardinalities, then the
    /// values.  `write_binary`/`read_binary` carry the same content in a
    /// fixed little-endian layout.
    void write_text(std::ostream& out) const;
    static JointTable read_text(std::istream& in);
    void write_binary(std::ostream& out) const;
    static JointTable read_binary(std::istream& in);

  private:
    std::vector<std::string> vars_;
    std::vector<int> cards_;
    std::vector<double> values_;
};

}  // namespace mdag

#endif  // MDAG_JOINT_TABLE_HPP
