package app;

public class App {
    public static void main(String[] args) {
        Account account = new Account("alice");
        account.deposit(10);
        account.withdraw(3);
        System.out.println(describe(account));
    }

    private static String describe(Account account) {
        return account.owner() + " " + account.balance();
    }
}
