package shop;

public class Order {
    public static final String PREFIX = "ORD";
    public static int nextId;
    public Cart cart;
    private final long id;
    private String status;
    private Customer customer;
    private double paid;
    protected int attempts;

    Order(long id) {
        this.id = id;
    }

    long id() {
        return id + attempts;
    }
}
