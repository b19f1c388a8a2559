package shop;

import java.util.List;

public class Cart {
    public List<Product> items;
    private double total;
    private int count;
    private String owner;
    private boolean open;

    public double total() {
        return total + count;
    }

    boolean isOpen() {
        return open && owner != null;
    }
}
