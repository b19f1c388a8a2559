package store;
import java.util.ArrayList;
import java.util.List;
import java.util.Objects;
// Stock levels for one warehouse.
public class Inventory {
    /* Items are kept in insertion order. */
    private final List<String> items = new ArrayList<>();
    private final String url = "http://example.org/*not a comment*/";
    private int capacity; // trailing comments do not hide code
    /**
     * Creates an inventory with room for the given number of items.
     */
    public Inventory(int capacity) {
        this.capacity = capacity;
    }
    public boolean add(String item) {
        if (items.size() >= capacity) {
            return false;
        }
        items.add(item);
        return true;
    }
    public boolean remove(String item) {
        return items.remove(Objects.requireNonNull(item));
    }
    public int size() {
        return items.size();
    }
    public int capacity() {
        return capacity;
    }
    public void grow(int extra) { /* no upper bound */
        capacity += extra;
    }
    public String first() {
        if (items.isEmpty()) {
            return null;
        }
        return items.get(0);
    }
    public String last() {
        if (items.isEmpty()) {
            return null;
        }
        return items.get(items.size() - 1);
    }
    public String describe() {
        String slash = "//";
        char star = '*';
        return url + slash + star + items;
    }
    public void clear() {
        items.clear();
    }
    // end of inventory
}
